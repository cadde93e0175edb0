#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

#include "loewner/errors.hpp"
#include "loewner/rng.hpp"

namespace loewner {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Symmetrization gate: inputs whose relative deviation from their adjoint
/// exceeds this are rejected as not-Hermitian rather than silently averaged.
inline constexpr double kAsymTol = 1e-10;

/// Spectral reconstruction accuracy required of every decomposition,
/// relative to the max-entry norm of the source matrix.
inline constexpr double kRelTolReconstruct = 1e-12;

/// Default relative tolerance for Loewner order comparisons. An inequality
/// A <= B is accepted when min-eig(B - A) >= -tol * max(||A||, ||B||), which
/// keeps verdicts invariant under rescaling both arguments.
inline constexpr double kDefaultLoewnerTol = 1e-9;

/// d x d complex matrix with exact Hermitian symmetry (stored symmetrized).
class HermitianMatrix {
 public:
  static HermitianMatrix identity(Eigen::Index dim);
  static HermitianMatrix zero(Eigen::Index dim);
  static HermitianMatrix diagonal(const RealVector& values);

  Eigen::Index dim() const { return entries_.rows(); }
  const ComplexMatrix& entries() const { return entries_; }

  /// Max |raw - raw*| recorded when the value was symmetrized.
  double asymmetry() const { return asymmetry_; }

  double max_abs() const;
  double operator_norm() const;  // spectral radius
  double trace() const { return entries_.trace().real(); }

 private:
  friend HermitianMatrix make_hermitian(const ComplexMatrix&, double);
  friend HermitianMatrix symmetrize(const ComplexMatrix&);
  HermitianMatrix(ComplexMatrix entries, double asymmetry)
      : entries_(std::move(entries)), asymmetry_(asymmetry) {}

  ComplexMatrix entries_;
  double asymmetry_ = 0.0;
};

/// Symmetrizes raw to (raw + raw*)/2. Throws NonSquareError, or
/// AsymmetryError when max |raw - raw*| exceeds asym_tol * max|raw|.
HermitianMatrix make_hermitian(const ComplexMatrix& raw,
                               double asym_tol = kAsymTol);

/// Ungated symmetrization for intermediates that are Hermitian by
/// construction, where ill-conditioned arithmetic may leave rounding
/// asymmetry beyond the input gate.
HermitianMatrix symmetrize(const ComplexMatrix& m);

/// Hermitian matrix validated to have strictly positive spectrum.
class PositiveDefiniteMatrix {
 public:
  /// Throws NotPositiveDefiniteError when the smallest eigenvalue is <= 0.
  explicit PositiveDefiniteMatrix(HermitianMatrix base);

  const HermitianMatrix& base() const { return base_; }
  const ComplexMatrix& entries() const { return base_.entries(); }
  Eigen::Index dim() const { return base_.dim(); }

  /// Smallest eigenvalue, cached at validation.
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  HermitianMatrix base_;
  double min_eigenvalue_;
};

struct SpectralDecomposition {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // unitary, columns match eigenvalues
};

/// Eigendecomposition with built-in verification: the reconstruction
/// U diag(w) U* and the unitarity of U are both checked against
/// kRelTolReconstruct; failure raises EigensolverError.
SpectralDecomposition spectral_decompose(const HermitianMatrix& h);

enum class Relation { LessEqual, GreaterEqual, Equal, Incomparable };

const char* to_string(Relation r);

/// Result of a Loewner order comparison. margin is the signed smallest
/// eigenvalue of the difference taken in the claimed direction (for Equal
/// and Incomparable, the better of the two directions).
struct LoewnerVerdict {
  Relation relation;
  double margin;
  double tolerance;
  double scale;  // max of the two operator norms
};

LoewnerVerdict loewner_compare(const HermitianMatrix& a,
                               const HermitianMatrix& b,
                               double tol = kDefaultLoewnerTol);

/// Directional margin for a claimed inequality a <= b.
struct DirectedMargin {
  double margin;  // min-eig(b - a)
  double scale;   // max(||a||, ||b||)
};

DirectedMargin le_margin(const HermitianMatrix& a, const HermitianMatrix& b);

/// Haar-distributed unitary (QR of a complex Ginibre matrix with phase fix).
ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng);

/// Random positive definite matrix with eigenvalues log-uniform in
/// [1/sqrt(cond_max), sqrt(cond_max)], conjugated by a Haar unitary.
/// Deterministic for fixed (dim, cond_max, seed).
PositiveDefiniteMatrix random_pd(Eigen::Index dim, double cond_max,
                                 std::uint64_t seed);
PositiveDefiniteMatrix random_pd(Eigen::Index dim, double cond_max, Rng& rng);

/// Random Hermitian matrix with operator norm <= norm_bound.
HermitianMatrix random_hermitian(Eigen::Index dim, double norm_bound,
                                 std::uint64_t seed);
HermitianMatrix random_hermitian(Eigen::Index dim, double norm_bound,
                                 Rng& rng);

}  // namespace loewner
