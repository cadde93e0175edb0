#include "loewner/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace loewner {

namespace {

Eigen::SelfAdjointEigenSolver<ComplexMatrix> solve_eigen(
    const ComplexMatrix& m, bool vectors) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver;
  solver.compute(m, vectors ? Eigen::ComputeEigenvectors
                            : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw EigensolverError("selfadjoint eigensolver did not converge");
  return solver;
}

double min_eigenvalue_of(const ComplexMatrix& m) {
  return solve_eigen(m, false).eigenvalues().minCoeff();
}

}  // namespace

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(ComplexMatrix::Identity(dim, dim), 0.0);
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) {
  return HermitianMatrix(ComplexMatrix::Zero(dim, dim), 0.0);
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& values) {
  ComplexMatrix m = ComplexMatrix::Zero(values.size(), values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return HermitianMatrix(std::move(m), 0.0);
}

double HermitianMatrix::max_abs() const {
  return entries_.cwiseAbs().maxCoeff();
}

double HermitianMatrix::operator_norm() const {
  if (dim() == 0) return 0.0;
  const auto w = solve_eigen(entries_, false).eigenvalues();
  return std::max(std::abs(w.minCoeff()), std::abs(w.maxCoeff()));
}

HermitianMatrix make_hermitian(const ComplexMatrix& raw, double asym_tol) {
  if (raw.rows() != raw.cols())
    throw NonSquareError("matrix is " + std::to_string(raw.rows()) + "x" +
                         std::to_string(raw.cols()));
  const ComplexMatrix adj = raw.adjoint();
  const double asym = (raw - adj).cwiseAbs().maxCoeff();
  const double magnitude = raw.cwiseAbs().maxCoeff();
  if (asym > asym_tol * magnitude)
    throw AsymmetryError("input deviates from Hermitian by " +
                         std::to_string(asym) + " (relative gate " +
                         std::to_string(asym_tol) + ")");
  return HermitianMatrix((raw + adj) / 2.0, asym);
}

HermitianMatrix symmetrize(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    throw NonSquareError("matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  const ComplexMatrix adj = m.adjoint();
  return HermitianMatrix((m + adj) / 2.0, (m - adj).cwiseAbs().maxCoeff());
}

PositiveDefiniteMatrix::PositiveDefiniteMatrix(HermitianMatrix base)
    : base_(std::move(base)), min_eigenvalue_(0.0) {
  min_eigenvalue_ = min_eigenvalue_of(base_.entries());
  if (!(min_eigenvalue_ > 0.0))
    throw NotPositiveDefiniteError("smallest eigenvalue " +
                                   std::to_string(min_eigenvalue_) +
                                   " is not strictly positive");
}

SpectralDecomposition spectral_decompose(const HermitianMatrix& h) {
  const auto solver = solve_eigen(h.entries(), true);
  SpectralDecomposition sd{solver.eigenvalues(), solver.eigenvectors()};

  // Verify the decomposition before handing it out.
  const Eigen::Index d = h.dim();
  const ComplexMatrix recon = sd.eigenvectors *
                              sd.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
                              sd.eigenvectors.adjoint();
  const double err = (recon - h.entries()).cwiseAbs().maxCoeff();
  const double scale = std::max(h.max_abs(), 1e-300);
  if (err > kRelTolReconstruct * scale)
    throw EigensolverError("spectral reconstruction off by " +
                           std::to_string(err / scale) + " relative");
  const double unit_err =
      (sd.eigenvectors.adjoint() * sd.eigenvectors - ComplexMatrix::Identity(d, d))
          .cwiseAbs()
          .maxCoeff();
  if (unit_err > kRelTolReconstruct)
    throw EigensolverError("eigenvector basis not unitary");
  return sd;
}

const char* to_string(Relation r) {
  switch (r) {
    case Relation::LessEqual: return "less_equal";
    case Relation::GreaterEqual: return "greater_equal";
    case Relation::Equal: return "equal";
    case Relation::Incomparable: return "incomparable";
  }
  return "?";
}

LoewnerVerdict loewner_compare(const HermitianMatrix& a,
                               const HermitianMatrix& b, double tol) {
  if (a.dim() != b.dim())
    throw DimensionMismatchError("loewner_compare: dims " +
                                 std::to_string(a.dim()) + " vs " +
                                 std::to_string(b.dim()));
  const auto w = solve_eigen(b.entries() - a.entries(), false).eigenvalues();
  const double le = w.minCoeff();        // min-eig(B - A)
  const double ge = -w.maxCoeff();       // min-eig(A - B)
  const double scale = std::max(a.operator_norm(), b.operator_norm());
  const double band = tol * scale;
  const bool le_holds = le >= -band;
  const bool ge_holds = ge >= -band;

  Relation rel;
  double margin;
  if (le_holds && ge_holds) {
    rel = Relation::Equal;
    margin = std::max(le, ge);
  } else if (le_holds) {
    rel = Relation::LessEqual;
    margin = le;
  } else if (ge_holds) {
    rel = Relation::GreaterEqual;
    margin = ge;
  } else {
    rel = Relation::Incomparable;
    margin = std::max(le, ge);
  }
  return LoewnerVerdict{rel, margin, tol, scale};
}

DirectedMargin le_margin(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatchError("le_margin: dims " + std::to_string(a.dim()) +
                                 " vs " + std::to_string(b.dim()));
  const double m =
      solve_eigen(b.entries() - a.entries(), false).eigenvalues().minCoeff();
  return DirectedMargin{m, std::max(a.operator_norm(), b.operator_norm())};
}

ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng) {
  ComplexMatrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i)
      g(i, j) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases so the distribution is Haar.
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double ad = std::abs(d);
    q.col(j) *= ad > 0 ? d / ad : Complex(1.0, 0.0);
  }
  return q;
}

PositiveDefiniteMatrix random_pd(Eigen::Index dim, double cond_max, Rng& rng) {
  if (dim < 1) throw DomainViolationError("random_pd: dim must be >= 1");
  if (!(cond_max >= 1.0))
    throw DomainViolationError("random_pd: cond_max must be >= 1");
  const double hi = std::log(std::sqrt(cond_max));
  RealVector w(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    w[i] = std::exp(rng.uniform(-hi, hi));
  const ComplexMatrix u = random_unitary(dim, rng);
  const ComplexMatrix m = u * w.asDiagonal().toDenseMatrix().cast<Complex>() *
                          u.adjoint();
  return PositiveDefiniteMatrix(symmetrize(m));
}

PositiveDefiniteMatrix random_pd(Eigen::Index dim, double cond_max,
                                 std::uint64_t seed) {
  Rng rng(seed);
  return random_pd(dim, cond_max, rng);
}

HermitianMatrix random_hermitian(Eigen::Index dim, double norm_bound,
                                 Rng& rng) {
  if (dim < 1) throw DomainViolationError("random_hermitian: dim must be >= 1");
  if (!(norm_bound > 0.0))
    throw DomainViolationError("random_hermitian: norm_bound must be > 0");
  ComplexMatrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i)
      g(i, j) = Complex(rng.normal(), rng.normal());
  HermitianMatrix h = symmetrize((g + g.adjoint()) / 2.0);
  const double norm = h.operator_norm();
  if (norm > norm_bound)
    h = symmetrize(h.entries() * (norm_bound / norm));
  return h;
}

HermitianMatrix random_hermitian(Eigen::Index dim, double norm_bound,
                                 std::uint64_t seed) {
  Rng rng(seed);
  return random_hermitian(dim, norm_bound, rng);
}

}  // namespace loewner
