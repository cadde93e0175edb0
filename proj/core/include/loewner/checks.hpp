#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "loewner/funcalc.hpp"
#include "loewner/means.hpp"
#include "loewner/outcome.hpp"
#include "loewner/posmaps.hpp"

namespace loewner {

/// Tolerances for the counterexample reproduction against the published
/// digits, and the robustness floor for its negative eigenvalue.
inline constexpr double kCounterexampleEntryTol = 1e-4;
inline constexpr double kCounterexampleEigTol = 1e-3;
inline constexpr double kCounterexampleNegativityFloor = 1e-3;

/// Relative tolerance of the trace-switch identity.
inline constexpr double kTraceSwitchTol = 1e-9;

/// Analytic vs finite-difference agreement required inside the Lieb check.
inline constexpr double kLiebFdAgreement = 1e-4;

/// Direct-path vs direct-sum-embedding agreement in the joint check.
inline constexpr double kJointRouteAgreement = 1e-8;

/// Midpoint convexity of X -> g(Phi(f(X))) in the Loewner order:
/// g(Phi(f(X v Y))) <= ( g(Phi(f(X))) + g(Phi(f(Y))) ) / 2.
/// Requires f OMDPos, g OM, Phi strictly positive.
CheckOutcome check_main_convexity(const ScalarFunctionSpec& g,
                                  const ScalarFunctionSpec& f,
                                  const PositiveMapSpec& phi,
                                  const PositiveDefiniteMatrix& x,
                                  const PositiveDefiniteMatrix& y,
                                  double tol = kDefaultLoewnerTol,
                                  std::uint64_t seed = 0);

/// The three links that compose into the midpoint inequality:
///   step1: g(Phi(f(X v Y)))        <= g(Phi(f(X) ! f(Y)))
///   step2: g(Phi(f(X) ! f(Y)))     <= g(Phi(f(X)) ! Phi(f(Y)))
///   step3: g(Phi(f(X)) ! Phi(f(Y))) <= g(Phi(f(X))) v g(Phi(f(Y)))
std::array<CheckOutcome, 3> check_proof_chain(const ScalarFunctionSpec& g,
                                              const ScalarFunctionSpec& f,
                                              const PositiveMapSpec& phi,
                                              const PositiveDefiniteMatrix& x,
                                              const PositiveDefiniteMatrix& y,
                                              double tol = kDefaultLoewnerTol,
                                              std::uint64_t seed = 0);

/// Harmonic-mean subadditivity under a strictly positive map, plus the inner
/// Schwarz-type step it reduces to:
///   outer: Phi(X ! Y) <= Phi(X) ! Phi(Y)
///   inner: Phi(X (X+Y)^{-1} X) >= Phi(X) Phi(X+Y)^{-1} Phi(X)
std::pair<CheckOutcome, CheckOutcome> check_harmonic_subadditivity(
    const PositiveMapSpec& phi, const PositiveDefiniteMatrix& x,
    const PositiveDefiniteMatrix& y, double tol = kDefaultLoewnerTol,
    std::uint64_t seed = 0);

/// f(X v Y) <= f(X) ! f(Y) for OMDPos f.
CheckOutcome check_f_mean_inequality(const ScalarFunctionSpec& f,
                                     const PositiveDefiniteMatrix& x,
                                     const PositiveDefiniteMatrix& y,
                                     double tol = kDefaultLoewnerTol,
                                     std::uint64_t seed = 0);

/// Phi(X s Y) <= Phi(X) s Phi(Y) for s in {arithmetic, harmonic, geometric}.
CheckOutcome check_mean_subadditivity(MeanKind kind, const PositiveMapSpec& phi,
                                      const PositiveDefiniteMatrix& x,
                                      const PositiveDefiniteMatrix& y,
                                      double tol = kDefaultLoewnerTol,
                                      std::uint64_t seed = 0);

/// Jensen inequality f(Phi(X)) <= Phi(f(X)) for a unital positive map and
/// the operator convex f(x) = 1/x. Throws DomainViolationError when the map
/// is not unital.
CheckOutcome check_jensen_inverse(const PositiveMapSpec& unital_phi,
                                  const PositiveDefiniteMatrix& x,
                                  double tol = kDefaultLoewnerTol,
                                  std::uint64_t seed = 0);

/// Kadison inequality Phi(b^2) >= Phi(b)^2 for a unital positive map.
CheckOutcome check_kadison(const PositiveMapSpec& unital_phi,
                           const HermitianMatrix& b,
                           double tol = kDefaultLoewnerTol,
                           std::uint64_t seed = 0);

/// The published 2x2 pair for which the square-root/geometric-mean route
/// fails: with g(x) = sqrt(x), (g(S) + g(T))/2 - g(S # T) has one strictly
/// negative eigenvalue.
struct CounterexampleResult {
  HermitianMatrix s;
  HermitianMatrix t;
  HermitianMatrix geo_mean;    // S # T
  HermitianMatrix difference;  // (sqrt(S)+sqrt(T))/2 - sqrt(S # T)
  double lambda1 = 0.0;        // larger eigenvalue of the difference
  double lambda2 = 0.0;        // smaller eigenvalue (negative)
  double max_entry_error = 0.0;  // geo_mean vs the published digits
  bool matches_reference = false;
  bool lambda2_negative = false;
};

CounterexampleResult reproduce_counterexample();

enum class FixedVariable { First, Second };

/// Separate convexity of the two-variable trace functional
/// (X, Y) -> Tr g( Phi(f1(X))^{1/2} Psi(f2(Y)) Phi(f1(X))^{1/2} )
/// in the non-fixed variable, along the segment [p0, p1] (midpoint plus a
/// 9-point grid). The frozen map is built with two_var_freeze.
CheckOutcome check_separate_convexity(
    const ScalarFunctionSpec& f1, const ScalarFunctionSpec& f2,
    const ScalarFunctionSpec& g, const PositiveMapSpec& phi,
    const PositiveMapSpec& psi, FixedVariable fixed,
    const PositiveDefiniteMatrix& fixed_point,
    const PositiveDefiniteMatrix& p0, const PositiveDefiniteMatrix& p1,
    double tol = kDefaultLoewnerTol, std::uint64_t seed = 0);

/// Tr h(P^{1/2} Q P^{1/2}) = Tr h(Q^{1/2} P Q^{1/2}); the two products are
/// isospectral, so the relative difference must be within kTraceSwitchTol.
CheckOutcome check_trace_switch(const PositiveDefiniteMatrix& p,
                                const PositiveDefiniteMatrix& q,
                                const ScalarFunctionSpec& h,
                                double tol = kDefaultLoewnerTol,
                                std::uint64_t seed = 0);

/// Convexity of X -> tau(Phi(f1(X)) K* Phi(f2(X)) K) for resolvent f1, f2:
/// the analytic second derivative along direction Y must be nonnegative and
/// must agree with a central finite difference; midpoint convexity along
/// [X - sY, X + sY] is checked as well.
CheckOutcome check_lieb_convexity(const ScalarFunctionSpec& f1,
                                  const ScalarFunctionSpec& f2,
                                  const PositiveMapSpec& phi,
                                  const TracialFunctional& tau,
                                  const ComplexMatrix& k,
                                  const PositiveDefiniteMatrix& x,
                                  const HermitianMatrix& y,
                                  double tol = kDefaultLoewnerTol,
                                  std::uint64_t seed = 0);

/// Joint midpoint convexity of
/// (X, Y) -> tau( Phi(f1(X))^{1/2} Psi(f2(Y)) Phi(f1(X))^{1/2} ),
/// evaluated both directly and through the block direct-sum embedding with
/// K = [[0,0],[I,0]]; the two midpoint margins must agree within
/// kJointRouteAgreement.
CheckOutcome check_joint_convexity(
    const ScalarFunctionSpec& f1, const ScalarFunctionSpec& f2,
    const PositiveMapSpec& phi, const PositiveMapSpec& psi,
    const TracialFunctional& tau, const PositiveDefiniteMatrix& x1,
    const PositiveDefiniteMatrix& y1, const PositiveDefiniteMatrix& x2,
    const PositiveDefiniteMatrix& y2, double tol = kDefaultLoewnerTol,
    std::uint64_t seed = 0);

}  // namespace loewner
