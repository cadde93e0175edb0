#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <loewner/funcalc.hpp>
#include <loewner/posmaps.hpp>

#include "oracles.hpp"

using namespace loewner;

namespace {

PositiveDefiniteMatrix pd_from(const oracles::Mat& m) {
  return PositiveDefiniteMatrix(make_hermitian(m, 1e-9));
}

PositiveMapSpec random_congruence(int in_dim, int out_dim, int terms,
                                  std::mt19937_64& gen) {
  std::vector<ComplexMatrix> ks;
  for (int i = 0; i < terms; ++i) {
    oracles::Mat k(in_dim, out_dim);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int r = 0; r < in_dim; ++r)
      for (int c = 0; c < out_dim; ++c) k(r, c) = Complex(n(gen), n(gen));
    ks.push_back(k);
  }
  return PositiveMapSpec::congruence_sum(std::move(ks));
}

}  // namespace

TEST_CASE("identity, state and congruence evaluation") {
  const PositiveMapSpec id = PositiveMapSpec::identity(3);
  const HermitianMatrix x = random_hermitian(3, 2.0, 5);
  CHECK(oracles::max_abs_diff(apply_map(id, x).entries(), x.entries()) == 0.0);

  // Maximally mixed state sends X to Tr(X)/d.
  const PositiveMapSpec uniform = PositiveMapSpec::state(
      PositiveDefiniteMatrix(HermitianMatrix::identity(4)));
  const HermitianMatrix y = random_hermitian(4, 1.0, 6);
  CHECK(apply_map(uniform, y).entries()(0, 0).real() ==
        doctest::Approx(y.trace() / 4.0));

  // K = [[0,0],[1,0]]: K* X K picks out the (2,2) entry, by hand.
  oracles::Mat k(2, 2);
  k << 0.0, 0.0, 1.0, 0.0;
  const PositiveMapSpec cong = PositiveMapSpec::congruence_sum({k});
  const HermitianMatrix z = random_hermitian(2, 1.0, 7);
  const HermitianMatrix out = apply_map(cong, z);
  CHECK(out.entries()(0, 0) == z.entries()(1, 1));
  CHECK(std::abs(out.entries()(0, 1)) == 0.0);
  CHECK(std::abs(out.entries()(1, 1)) == 0.0);
}

TEST_CASE("pinching keeps the blocks and drops the rest") {
  const PositiveMapSpec pinch = PositiveMapSpec::pinching({2, 2});
  const HermitianMatrix x = random_hermitian(4, 1.0, 8);
  const HermitianMatrix out = apply_map(pinch, x);
  CHECK(oracles::max_abs_diff(out.entries().topLeftCorner(2, 2),
                              x.entries().topLeftCorner(2, 2)) == 0.0);
  CHECK(oracles::max_abs(out.entries().topRightCorner(2, 2)) == 0.0);
  CHECK(pinch.strictly_positive());
}

TEST_CASE("maps are complex-linear") {
  std::mt19937_64 gen(100);
  std::normal_distribution<double> n(0.0, 1.0);
  const PositiveMapSpec maps[] = {
      PositiveMapSpec::identity(3),
      PositiveMapSpec::state(random_pd(3, 10.0, 4)),
      random_congruence(3, 2, 2, gen),
      PositiveMapSpec::pinching({1, 2}),
      PositiveMapSpec::trace_functional(3, 0.7)};
  for (const auto& phi : maps) {
    for (int trial = 0; trial < 100; ++trial) {
      const oracles::Mat x = oracles::random_ginibre(3, gen);
      const oracles::Mat y = oracles::random_ginibre(3, gen);
      const Complex a(n(gen), n(gen));
      const Complex b(n(gen), n(gen));
      const oracles::Mat lhs = apply_linear(phi, a * x + b * y);
      const oracles::Mat rhs =
          a * apply_linear(phi, x) + b * apply_linear(phi, y);
      CHECK(oracles::max_abs_diff(lhs, rhs) <=
            1e-10 * std::max(1.0, oracles::max_abs(rhs)));
    }
  }
}

TEST_CASE("positive maps send PSD to PSD") {
  std::mt19937_64 gen(200);
  const PositiveMapSpec maps[] = {
      PositiveMapSpec::identity(4),
      PositiveMapSpec::state(random_pd(4, 100.0, 9)),
      random_congruence(4, 3, 2, gen),
      random_congruence(4, 5, 1, gen),
      PositiveMapSpec::pinching({1, 3}),
      PositiveMapSpec::trace_functional(4, 2.0)};
  for (const auto& phi : maps) {
    for (int trial = 0; trial < 100; ++trial) {
      // PSD input, possibly singular: G G*.
      const oracles::Mat g = oracles::random_ginibre(4, gen);
      const HermitianMatrix psd = symmetrize(g * g.adjoint());
      const HermitianMatrix out = apply_map(phi, psd);
      const double scale = std::max(1.0, out.operator_norm());
      CHECK(oracles::min_eig(out.entries()) >= -1e-9 * scale);
    }
  }
}

TEST_CASE("strictness flag matches the kernel structure of congruences") {
  oracles::Mat k_rank1(2, 2);
  k_rank1 << 1.0, 0.0, 0.0, 0.0;
  const PositiveMapSpec degenerate = PositiveMapSpec::congruence_sum({k_rank1});
  CHECK(!degenerate.strictly_positive());

  // Two rank-deficient terms with trivial joint kernel are jointly strict.
  oracles::Mat k2(2, 2);
  k2 << 0.0, 0.0, 0.0, 1.0;
  const PositiveMapSpec joint =
      PositiveMapSpec::congruence_sum({k_rank1, k2});
  CHECK(joint.strictly_positive());

  CHECK(PositiveMapSpec::identity(5).strictly_positive());
  CHECK(PositiveMapSpec::state(random_pd(3, 10.0, 2)).strictly_positive());
  CHECK(PositiveMapSpec::trace_functional(3, 1.0).strictly_positive());
  CHECK(!PositiveMapSpec::trace_functional(3, 0.0).strictly_positive());
}

TEST_CASE("unitalize sends the identity to the identity") {
  std::mt19937_64 gen(300);
  const PositiveDefiniteMatrix anchor = random_pd(3, 20.0, 31);

  const PositiveMapSpec u1 =
      unitalize(PositiveMapSpec::identity(3), anchor);
  const ComplexMatrix e1 =
      apply_linear(u1, ComplexMatrix::Identity(3, 3));
  CHECK(oracles::max_abs_diff(e1, ComplexMatrix::Identity(3, 3)) <= 1e-10);

  const PositiveMapSpec u2 =
      unitalize(PositiveMapSpec::state(random_pd(3, 10.0, 7)), anchor);
  CHECK(apply_linear(u2, ComplexMatrix::Identity(3, 3))(0, 0).real() ==
        doctest::Approx(1.0).epsilon(1e-10));

  for (int trial = 0; trial < 10; ++trial) {
    const PositiveMapSpec phi = random_congruence(3, 3, 2, gen);
    REQUIRE(phi.strictly_positive());
    const PositiveDefiniteMatrix a = pd_from(oracles::random_spd(3, 0.1, 10.0, gen));
    const PositiveMapSpec u = unitalize(phi, a);
    CHECK(oracles::max_abs_diff(
              apply_linear(u, ComplexMatrix::Identity(3, 3)),
              ComplexMatrix::Identity(3, 3)) <= 1e-10);
  }

  oracles::Mat k_rank1(2, 2);
  k_rank1 << 1.0, 0.0, 0.0, 0.0;
  CHECK_THROWS_AS(unitalize(PositiveMapSpec::congruence_sum({k_rank1}),
                            random_pd(2, 10.0, 3)),
                  NotStrictlyPositiveError);
}

TEST_CASE("two_var_freeze conjugates by the square root of Phi(f1(X))") {
  // Phi(f1(X)) = diag(4, 1) makes the frozen map T -> diag(2,1) T diag(2,1).
  const PositiveDefiniteMatrix frozen_arg(HermitianMatrix::diagonal(
      (Eigen::VectorXd(2) << 4.0, 1.0).finished()));
  const PositiveMapSpec frozen = two_var_freeze(
      PositiveMapSpec::identity(2), frozen_arg, PositiveMapSpec::identity(2));
  const HermitianMatrix t = random_hermitian(2, 1.0, 12);
  oracles::Mat c(2, 2);
  c << 2.0, 0.0, 0.0, 1.0;
  CHECK(oracles::max_abs_diff(apply_map(frozen, t).entries(),
                              c * t.entries() * c) <= 1e-12);

  // Phi(f1(X)) = I leaves the partner map unchanged.
  const PositiveMapSpec same = two_var_freeze(
      PositiveMapSpec::identity(2),
      PositiveDefiniteMatrix(HermitianMatrix::identity(2)),
      PositiveMapSpec::pinching({1, 1}));
  const HermitianMatrix x = random_hermitian(2, 1.0, 13);
  CHECK(oracles::max_abs_diff(
            apply_map(same, x).entries(),
            apply_map(PositiveMapSpec::pinching({1, 1}), x).entries()) <=
        1e-12);

  // Positivity probe on a random instance.
  std::mt19937_64 gen(400);
  const PositiveMapSpec phi = random_congruence(3, 3, 2, gen);
  const PositiveMapSpec psi = random_congruence(3, 3, 1, gen);
  const PositiveMapSpec froz =
      two_var_freeze(phi, pd_from(oracles::random_spd(3, 0.1, 5.0, gen)), psi);
  for (int trial = 0; trial < 100; ++trial) {
    const oracles::Mat g = oracles::random_ginibre(3, gen);
    const HermitianMatrix out = apply_map(froz, symmetrize(g * g.adjoint()));
    CHECK(oracles::min_eig(out.entries()) >=
          -1e-9 * std::max(1.0, out.operator_norm()));
  }
}

TEST_CASE("direct sum evaluates blockwise and rejects cross blocks") {
  const PositiveMapSpec both = direct_sum_map(PositiveMapSpec::identity(1),
                                              PositiveMapSpec::identity(1));
  const HermitianMatrix d = HermitianMatrix::diagonal(
      (Eigen::VectorXd(2) << 3.0, -1.0).finished());
  CHECK(oracles::max_abs_diff(apply_map(both, d).entries(), d.entries()) == 0.0);

  std::mt19937_64 gen(500);
  const PositiveMapSpec phi = random_congruence(2, 2, 2, gen);
  const PositiveMapSpec psi = PositiveMapSpec::pinching({1, 2});
  const PositiveMapSpec sum = direct_sum_map(phi, psi);
  CHECK(sum.in_dim() == 5);
  CHECK(sum.out_dim() == 5);

  const HermitianMatrix id5 = HermitianMatrix::identity(5);
  const HermitianMatrix out = apply_map(sum, id5);
  CHECK(oracles::max_abs_diff(
            out.entries().topLeftCorner(2, 2),
            apply_map(phi, HermitianMatrix::identity(2)).entries()) <= 1e-14);
  CHECK(oracles::max_abs_diff(out.entries().bottomRightCorner(3, 3),
                              ComplexMatrix::Identity(3, 3)) <= 1e-14);

  // Strictness margin of the sum is the smaller of the two.
  CHECK(sum.strictness_margin() ==
        doctest::Approx(
            std::min(phi.strictness_margin(), psi.strictness_margin()))
            .epsilon(1e-9));

  const HermitianMatrix full = random_hermitian(5, 1.0, 3);
  CHECK_THROWS_AS(apply_map(sum, full), DomainViolationError);
}

TEST_CASE("tracial functional is tracial and rejects negative weights") {
  std::mt19937_64 gen(600);
  const TracialFunctional tau(1.3);
  for (int trial = 0; trial < 100; ++trial) {
    const oracles::Mat u = oracles::random_ginibre(3, gen);
    const oracles::Mat v = oracles::random_ginibre(3, gen);
    const double a = tau.value(u * v);
    const double b = tau.value(v * u);
    CHECK(std::abs(a - b) <= 1e-10 * std::max({1.0, std::abs(a), std::abs(b)}));
  }
  CHECK_THROWS_AS(TracialFunctional(-0.1), DomainViolationError);
}

TEST_CASE("Jensen inequality for unitalized maps with f(x) = 1/x") {
  std::mt19937_64 gen(700);
  const ScalarFunctionSpec inv = ScalarFunctionSpec::power(-1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + static_cast<int>(gen() % 3);
    const PositiveMapSpec phi = random_congruence(d, d, 2, gen);
    REQUIRE(phi.strictly_positive());
    const PositiveMapSpec u =
        unitalize(phi, pd_from(oracles::random_spd(d, 0.5, 5.0, gen)));
    const PositiveDefiniteMatrix x =
        pd_from(oracles::random_spd(d, 0.1, 10.0, gen));
    const HermitianMatrix lhs =
        apply(inv, PositiveDefiniteMatrix(apply_map(u, x.base())));
    const HermitianMatrix rhs = apply_map(u, apply(inv, x));
    const auto verdict = loewner_compare(lhs, rhs);
    CHECK((verdict.relation == Relation::LessEqual ||
           verdict.relation == Relation::Equal));
  }
}

TEST_CASE("Kadison inequality for unitalized maps") {
  std::mt19937_64 gen(800);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + static_cast<int>(gen() % 3);
    const PositiveMapSpec phi = random_congruence(d, d, 2, gen);
    const PositiveMapSpec u =
        unitalize(phi, pd_from(oracles::random_spd(d, 0.5, 5.0, gen)));
    const HermitianMatrix b = make_hermitian(oracles::random_hermitian(d, gen));
    const HermitianMatrix phi_b = apply_map(u, b);
    const HermitianMatrix lhs = symmetrize(phi_b.entries() * phi_b.entries());
    const HermitianMatrix rhs =
        apply_map(u, symmetrize(b.entries() * b.entries()));
    const auto verdict = loewner_compare(lhs, rhs);
    CHECK((verdict.relation == Relation::LessEqual ||
           verdict.relation == Relation::Equal));
  }
}

TEST_CASE("descriptor encodings round-trip") {
  const char* samples[] = {"identity",
                           "identity:3",
                           "state:uniform",
                           "state:seed=5",
                           "congruence_sum:k=2;seed=9",
                           "pinching:2+2",
                           "pinching:1+2+1",
                           "trace:c=1",
                           "direct_sum(identity:2,state:seed=1)",
                           "direct_sum(pinching:1+1,direct_sum(identity:1,identity:1))"};
  for (const char* text : samples) {
    const auto desc = PositiveMapDescriptor::parse(text);
    CHECK(PositiveMapDescriptor::parse(desc.render()) == desc);
    CHECK(desc.render() == text);
  }
  CHECK_THROWS_AS(PositiveMapDescriptor::parse("choi:3"), ParseError);
  CHECK_THROWS_AS(PositiveMapDescriptor::parse("state:both"), ParseError);
  CHECK_THROWS_AS(PositiveMapDescriptor::parse("direct_sum(identity:2"),
                  ParseError);
  CHECK_THROWS_AS(PositiveMapDescriptor::parse("pinching:0+2"), ParseError);
}

TEST_CASE("descriptors materialize deterministically and respect dims") {
  const auto cong = PositiveMapDescriptor::parse("congruence_sum:k=2;seed=9");
  const PositiveMapSpec a = cong.materialize(3);
  const PositiveMapSpec b = cong.materialize(3);
  const HermitianMatrix x = random_hermitian(3, 1.0, 40);
  CHECK(oracles::max_abs_diff(apply_map(a, x).entries(),
                              apply_map(b, x).entries()) == 0.0);
  CHECK(a.strictly_positive());

  const auto pinch = PositiveMapDescriptor::parse("pinching:2+2");
  CHECK(pinch.materialize(4).in_dim() == 4);
  CHECK_THROWS_AS(pinch.materialize(5), DimensionMismatchError);
  CHECK_THROWS_AS(PositiveMapDescriptor::parse("identity:3").materialize(4),
                  DimensionMismatchError);

  const auto uniform = PositiveMapDescriptor::parse("state:uniform");
  const PositiveMapSpec st = uniform.materialize(4);
  CHECK(apply_map(st, HermitianMatrix::identity(4)).entries()(0, 0).real() ==
        doctest::Approx(1.0));

  const auto ds = PositiveMapDescriptor::parse("direct_sum(identity:2,state:seed=1)");
  const PositiveMapSpec sum = ds.materialize(5);  // 2 + 3 split
  CHECK(sum.in_dim() == 5);
  CHECK(sum.out_dim() == 3);
}
