#pragma once

#include <string_view>

#include "loewner/matrix.hpp"

namespace loewner {

/// Required agreement between the inverse formula and the parallel-sum
/// identity inside harmonic_mean (relative, max-entry norm).
inline constexpr double kHarmonicAgreementTol = 1e-10;

/// Required symmetry X#Y = Y#X inside geometric_mean (relative).
inline constexpr double kGeometricSymmetryTol = 1e-9;

/// (X + Y) / 2.
PositiveDefiniteMatrix arithmetic_mean(const PositiveDefiniteMatrix& x,
                                       const PositiveDefiniteMatrix& y);

/// ((X^{-1} + Y^{-1}) / 2)^{-1}. Also evaluates the parallel-sum identity
/// 2(X - X (X+Y)^{-1} X) and raises ConsistencyError if the two routes
/// disagree beyond consistency_tol; the inverse-formula value is returned.
PositiveDefiniteMatrix harmonic_mean(
    const PositiveDefiniteMatrix& x, const PositiveDefiniteMatrix& y,
    double consistency_tol = kHarmonicAgreementTol);

/// X^{1/2} (X^{-1/2} Y X^{-1/2})^{1/2} X^{1/2}. Computed from both sides;
/// raises ConsistencyError if symmetry fails beyond consistency_tol.
PositiveDefiniteMatrix geometric_mean(
    const PositiveDefiniteMatrix& x, const PositiveDefiniteMatrix& y,
    double consistency_tol = kGeometricSymmetryTol);

/// Builds the 2d x 2d block matrix [[X, Z],[Z, Y]] with Z = X#Y and compares
/// it against zero; the block characterization of the geometric mean says
/// the verdict must be GreaterEqual.
LoewnerVerdict check_geometric_block(const PositiveDefiniteMatrix& x,
                                     const PositiveDefiniteMatrix& y,
                                     double tol = kDefaultLoewnerTol);

enum class MeanKind { Arithmetic, Harmonic, Geometric };

std::string_view mean_name(MeanKind k);

/// Accepts "arithmetic", "harmonic", "geometric"; throws UnknownMeanError.
MeanKind parse_mean(std::string_view name);

PositiveDefiniteMatrix mean(MeanKind kind, const PositiveDefiniteMatrix& x,
                            const PositiveDefiniteMatrix& y);

}  // namespace loewner
