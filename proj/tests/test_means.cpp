#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <loewner/funcalc.hpp>
#include <loewner/means.hpp>

#include "oracles.hpp"

using namespace loewner;

namespace {

PositiveDefiniteMatrix pd_diag(std::initializer_list<double> vals) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v[i++] = x;
  return PositiveDefiniteMatrix(HermitianMatrix::diagonal(v));
}

PositiveDefiniteMatrix pd_from(const oracles::Mat& m) {
  return PositiveDefiniteMatrix(make_hermitian(m, 1e-9));
}

PositiveDefiniteMatrix paper_s() { return pd_diag({1.1, 0.1}); }

PositiveDefiniteMatrix paper_t() {
  oracles::Mat t(2, 2);
  t << 7.17, -4.41, -4.41, 3.13;
  return pd_from(t);
}

}  // namespace

TEST_CASE("arithmetic mean basics and the published pair") {
  const PositiveDefiniteMatrix p = random_pd(3, 10.0, 2);
  CHECK(oracles::max_abs_diff(arithmetic_mean(p, p).entries(), p.entries()) ==
        0.0);

  const auto m = arithmetic_mean(pd_diag({1, 3}), pd_diag({3, 1}));
  CHECK(m.entries()(0, 0).real() == doctest::Approx(2.0));
  CHECK(m.entries()(1, 1).real() == doctest::Approx(2.0));

  // Entrywise average of the published pair, computed by hand.
  const auto st = arithmetic_mean(paper_s(), paper_t());
  CHECK(st.entries()(0, 0).real() == doctest::Approx(4.135));
  CHECK(st.entries()(0, 1).real() == doctest::Approx(-2.205));
  CHECK(st.entries()(1, 1).real() == doctest::Approx(1.615));
}

TEST_CASE("harmonic mean basics and commuting case") {
  const PositiveDefiniteMatrix p = random_pd(4, 100.0, 6);
  CHECK(oracles::max_abs_diff(harmonic_mean(p, p).entries(), p.entries()) <=
        1e-12 * oracles::max_abs(p.entries()));

  const auto h = harmonic_mean(pd_diag({1, 3}), pd_diag({3, 1}));
  CHECK(h.entries()(0, 0).real() == doctest::Approx(1.5));
  CHECK(h.entries()(1, 1).real() == doctest::Approx(1.5));

  CHECK_THROWS_AS(harmonic_mean(pd_diag({1, 1}), pd_diag({1, 1, 1})),
                  DimensionMismatchError);
}

TEST_CASE("harmonic mean: both routes agree on random pairs") {
  std::mt19937_64 gen(14);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + static_cast<int>(gen() % 4);
    const PositiveDefiniteMatrix x =
        pd_from(oracles::random_spd(d, 0.01, 100.0, gen));
    const PositiveDefiniteMatrix y =
        pd_from(oracles::random_spd(d, 0.01, 100.0, gen));
    // The dual-route assertion runs inside; also compare against a plain
    // test-side evaluation of the inverse formula.
    const auto h = harmonic_mean(x, y);
    const oracles::Mat ref =
        (0.5 * (x.entries().inverse() + y.entries().inverse())).inverse();
    CHECK(oracles::max_abs_diff(h.entries(), ref) <=
          1e-9 * std::max(1.0, oracles::max_abs(ref)));
  }
}

TEST_CASE("geometric mean reproduces the published digits") {
  const auto g = geometric_mean(paper_s(), paper_t());
  CHECK(std::abs(g.entries()(0, 0).real() - 1.85834) <= 1e-4);
  CHECK(std::abs(g.entries()(0, 1).real() - (-0.63486)) <= 1e-4);
  CHECK(std::abs(g.entries()(1, 0).real() - (-0.63486)) <= 1e-4);
  CHECK(std::abs(g.entries()(1, 1).real() - 0.52569) <= 1e-4);
}

TEST_CASE("geometric mean fixed point and commuting case") {
  const PositiveDefiniteMatrix p = random_pd(3, 50.0, 11);
  CHECK(oracles::max_abs_diff(geometric_mean(p, p).entries(), p.entries()) <=
        1e-10 * oracles::max_abs(p.entries()));

  const auto g = geometric_mean(pd_diag({1, 4}), pd_diag({4, 1}));
  CHECK(g.entries()(0, 0).real() == doctest::Approx(2.0));
  CHECK(g.entries()(1, 1).real() == doctest::Approx(2.0));
}

TEST_CASE("block characterization: [[X,Z],[Z,Y]] is PSD at Z = X#Y") {
  const auto v_id = check_geometric_block(
      PositiveDefiniteMatrix(HermitianMatrix::identity(2)),
      PositiveDefiniteMatrix(HermitianMatrix::identity(2)));
  CHECK((v_id.relation == Relation::GreaterEqual ||
         v_id.relation == Relation::Equal));
  CHECK(std::abs(v_id.margin) <= 1e-9);

  const auto v_st = check_geometric_block(paper_s(), paper_t());
  CHECK(v_st.relation == Relation::GreaterEqual);
}

TEST_CASE("block maximality probe: enlarging Z breaks positivity") {
  std::mt19937_64 gen(21);
  const PositiveDefiniteMatrix x = pd_from(oracles::random_spd(3, 0.5, 5.0, gen));
  const PositiveDefiniteMatrix y = pd_from(oracles::random_spd(3, 0.5, 5.0, gen));
  CHECK(check_geometric_block(x, y).relation == Relation::GreaterEqual);

  const oracles::Mat z =
      geometric_mean(x, y).entries() + 0.01 * oracles::Mat::Identity(3, 3);
  oracles::Mat block(6, 6);
  block.topLeftCorner(3, 3) = x.entries();
  block.topRightCorner(3, 3) = z;
  block.bottomLeftCorner(3, 3) = z;
  block.bottomRightCorner(3, 3) = y.entries();
  CHECK(oracles::min_eig(block) < -1e-9 * oracles::max_abs(block));
}

TEST_CASE("mean ordering: harmonic <= geometric <= arithmetic") {
  std::mt19937_64 gen(33);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + static_cast<int>(gen() % 5);
    const PositiveDefiniteMatrix x =
        pd_from(oracles::random_spd(d, 0.01, 100.0, gen));
    const PositiveDefiniteMatrix y =
        pd_from(oracles::random_spd(d, 0.01, 100.0, gen));
    const auto h = harmonic_mean(x, y);
    const auto g = geometric_mean(x, y);
    const auto a = arithmetic_mean(x, y);
    const auto hg = loewner_compare(h.base(), g.base());
    const auto ga = loewner_compare(g.base(), a.base());
    CHECK((hg.relation == Relation::LessEqual || hg.relation == Relation::Equal));
    CHECK((ga.relation == Relation::LessEqual || ga.relation == Relation::Equal));
  }
}

TEST_CASE("congruence equivariance of all three means") {
  std::mt19937_64 gen(44);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 2 + static_cast<int>(gen() % 3);
    const PositiveDefiniteMatrix x =
        pd_from(oracles::random_spd(d, 0.1, 10.0, gen));
    const PositiveDefiniteMatrix y =
        pd_from(oracles::random_spd(d, 0.1, 10.0, gen));
    // Invertible K: unitary times a spread of scales.
    oracles::Mat k = oracles::random_unitary(d, gen);
    for (int i = 0; i < d; ++i) k.col(i) *= 0.5 + 1.5 * (i + 1.0) / d;

    for (const MeanKind kind :
         {MeanKind::Arithmetic, MeanKind::Harmonic, MeanKind::Geometric}) {
      const oracles::Mat lhs =
          k.adjoint() * mean(kind, x, y).entries() * k;
      const oracles::Mat rhs =
          mean(kind, pd_from(k.adjoint() * x.entries() * k),
               pd_from(k.adjoint() * y.entries() * k))
              .entries();
      CHECK(oracles::max_abs_diff(lhs, rhs) <=
            1e-9 * std::max(1.0, oracles::max_abs(rhs)));
    }
  }
}

TEST_CASE("scalar reduction of the three means") {
  std::mt19937_64 gen(55);
  std::uniform_real_distribution<double> u(0.01, 50.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double x = u(gen);
    const double y = u(gen);
    const auto px = pd_diag({x});
    const auto py = pd_diag({y});
    CHECK(arithmetic_mean(px, py).entries()(0, 0).real() ==
          doctest::Approx((x + y) / 2.0).epsilon(1e-12));
    CHECK(harmonic_mean(px, py).entries()(0, 0).real() ==
          doctest::Approx(2.0 / (1.0 / x + 1.0 / y)).epsilon(1e-12));
    CHECK(geometric_mean(px, py).entries()(0, 0).real() ==
          doctest::Approx(std::sqrt(x * y)).epsilon(1e-12));
  }
}

TEST_CASE("inverse duality between harmonic and arithmetic means") {
  std::mt19937_64 gen(66);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 1 + static_cast<int>(gen() % 5);
    const PositiveDefiniteMatrix x =
        pd_from(oracles::random_spd(d, 0.05, 20.0, gen));
    const PositiveDefiniteMatrix y =
        pd_from(oracles::random_spd(d, 0.05, 20.0, gen));
    const oracles::Mat lhs = harmonic_mean(x, y).entries().inverse();
    const oracles::Mat rhs =
        arithmetic_mean(pd_from(x.entries().inverse()),
                        pd_from(y.entries().inverse()))
            .entries();
    CHECK(oracles::max_abs_diff(lhs, rhs) <=
          1e-10 * std::max(1.0, oracles::max_abs(rhs)));
  }
}

TEST_CASE("mean names round-trip and unknown names are rejected") {
  for (const MeanKind k :
       {MeanKind::Arithmetic, MeanKind::Harmonic, MeanKind::Geometric})
    CHECK(parse_mean(mean_name(k)) == k);
  CHECK_THROWS_AS(parse_mean("quadratic"), UnknownMeanError);
}
