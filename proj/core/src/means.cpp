#include "loewner/means.hpp"

#include <algorithm>
#include <cmath>

#include "loewner/funcalc.hpp"

namespace loewner {

namespace {

void require_same_dim(const PositiveDefiniteMatrix& x,
                      const PositiveDefiniteMatrix& y, const char* what) {
  if (x.dim() != y.dim())
    throw DimensionMismatchError(std::string(what) + ": dims " +
                                 std::to_string(x.dim()) + " vs " +
                                 std::to_string(y.dim()));
}

void require_agreement(const ComplexMatrix& a, const ComplexMatrix& b,
                       double tol, const char* what) {
  const double diff = (a - b).cwiseAbs().maxCoeff();
  const double scale =
      std::max({a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff(), 1e-300});
  if (diff > tol * scale)
    throw ConsistencyError(std::string(what) + " routes disagree by " +
                           std::to_string(diff / scale) + " relative");
}

}  // namespace

PositiveDefiniteMatrix arithmetic_mean(const PositiveDefiniteMatrix& x,
                                       const PositiveDefiniteMatrix& y) {
  require_same_dim(x, y, "arithmetic_mean");
  return PositiveDefiniteMatrix(
      symmetrize((x.entries() + y.entries()) / 2.0));
}

PositiveDefiniteMatrix harmonic_mean(const PositiveDefiniteMatrix& x,
                                     const PositiveDefiniteMatrix& y,
                                     double consistency_tol) {
  require_same_dim(x, y, "harmonic_mean");
  const Eigen::Index d = x.dim();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);

  const ComplexMatrix xi = x.entries().llt().solve(id);
  const ComplexMatrix yi = y.entries().llt().solve(id);
  const ComplexMatrix avg = (xi + yi) / 2.0;
  const ComplexMatrix inverse_route = avg.llt().solve(id);

  // Parallel-sum identity: 2 (X - X (X+Y)^{-1} X).
  const ComplexMatrix w = (x.entries() + y.entries()).llt().solve(x.entries());
  const ComplexMatrix parallel_route = 2.0 * (x.entries() - x.entries() * w);

  require_agreement(inverse_route, parallel_route, consistency_tol,
                    "harmonic_mean");
  return PositiveDefiniteMatrix(symmetrize(inverse_route));
}

PositiveDefiniteMatrix geometric_mean(const PositiveDefiniteMatrix& x,
                                      const PositiveDefiniteMatrix& y,
                                      double consistency_tol) {
  require_same_dim(x, y, "geometric_mean");
  const ScalarFunctionSpec sqrt = ScalarFunctionSpec::power(0.5);
  const ScalarFunctionSpec inv_sqrt = ScalarFunctionSpec::power(-0.5);

  const auto one_sided = [&](const PositiveDefiniteMatrix& a,
                             const PositiveDefiniteMatrix& b) {
    const ComplexMatrix ah = apply_pd(sqrt, a).entries();
    const ComplexMatrix aih = apply_pd(inv_sqrt, a).entries();
    const PositiveDefiniteMatrix inner(
        symmetrize(aih * b.entries() * aih));
    const ComplexMatrix inner_sqrt = apply_pd(sqrt, inner).entries();
    return ComplexMatrix(ah * inner_sqrt * ah);
  };

  const ComplexMatrix from_x = one_sided(x, y);
  const ComplexMatrix from_y = one_sided(y, x);
  require_agreement(from_x, from_y, consistency_tol, "geometric_mean");
  return PositiveDefiniteMatrix(symmetrize(from_x));
}

LoewnerVerdict check_geometric_block(const PositiveDefiniteMatrix& x,
                                     const PositiveDefiniteMatrix& y,
                                     double tol) {
  require_same_dim(x, y, "check_geometric_block");
  const Eigen::Index d = x.dim();
  const ComplexMatrix z = geometric_mean(x, y).entries();
  ComplexMatrix block(2 * d, 2 * d);
  block.topLeftCorner(d, d) = x.entries();
  block.topRightCorner(d, d) = z;
  block.bottomLeftCorner(d, d) = z;
  block.bottomRightCorner(d, d) = y.entries();
  return loewner_compare(symmetrize(block), HermitianMatrix::zero(2 * d),
                         tol);
}

std::string_view mean_name(MeanKind k) {
  switch (k) {
    case MeanKind::Arithmetic: return "arithmetic";
    case MeanKind::Harmonic: return "harmonic";
    case MeanKind::Geometric: return "geometric";
  }
  return "?";
}

MeanKind parse_mean(std::string_view name) {
  if (name == "arithmetic") return MeanKind::Arithmetic;
  if (name == "harmonic") return MeanKind::Harmonic;
  if (name == "geometric") return MeanKind::Geometric;
  throw UnknownMeanError("unknown mean: '" + std::string(name) + "'");
}

PositiveDefiniteMatrix mean(MeanKind kind, const PositiveDefiniteMatrix& x,
                            const PositiveDefiniteMatrix& y) {
  switch (kind) {
    case MeanKind::Arithmetic: return arithmetic_mean(x, y);
    case MeanKind::Harmonic: return harmonic_mean(x, y);
    case MeanKind::Geometric: return geometric_mean(x, y);
  }
  throw UnknownMeanError("bad mean kind");
}

}  // namespace loewner
