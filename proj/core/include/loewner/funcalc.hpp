#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "loewner/matrix.hpp"
#include "loewner/outcome.hpp"

namespace loewner {

/// Monotonicity class a function declares and is validated against:
/// OM      — operator monotone on (0, inf)
/// OMDPos  — operator monotone decreasing with range in (0, inf)
/// None    — no guarantee; usable only as a negative control
enum class FunctionClass { OM, OMDPos, None };

const char* to_string(FunctionClass c);

struct PowerForm {
  double exponent;
  bool operator==(const PowerForm&) const = default;
};
struct LogForm {
  bool operator==(const LogForm&) const = default;
};
struct NegInverseForm {
  bool operator==(const NegInverseForm&) const = default;
};
/// x -> 1/(lambda + x), lambda >= 0.
struct ResolventForm {
  double lambda;
  bool operator==(const ResolventForm&) const = default;
};
/// x -> -1/(lambda + x), lambda >= 0.
struct NegResolventForm {
  double lambda;
  bool operator==(const NegResolventForm&) const = default;
};
struct MixtureTerm {
  double weight;  // > 0
  double lambda;  // >= 0
  bool operator==(const MixtureTerm&) const = default;
};
/// x -> alpha + beta*x + sum_i w_i * x/(lambda_i + x); beta >= 0.
struct MonotoneMixtureForm {
  double alpha;
  double beta;
  std::vector<MixtureTerm> terms;
  bool operator==(const MonotoneMixtureForm&) const = default;
};
/// x -> gamma + sum_i w_i / (lambda_i + x); gamma >= 0, and gamma > 0 or
/// terms nonempty so the function is strictly positive.
struct DecreasingMixtureForm {
  double gamma;
  std::vector<MixtureTerm> terms;
  bool operator==(const DecreasingMixtureForm&) const = default;
};

using FunctionForm =
    std::variant<PowerForm, LogForm, NegInverseForm, ResolventForm,
                 NegResolventForm, MonotoneMixtureForm, DecreasingMixtureForm>;

/// Scalar function on (0, inf) together with its declared class. The
/// (form, class) pairing is validated at construction: e.g. Power(p) may
/// declare OM only for p in [0,1] and OMDPos only for p in [-1,0]; class
/// None is reserved for Power, the negative-control family.
class ScalarFunctionSpec {
 public:
  ScalarFunctionSpec(FunctionForm form, FunctionClass declared);

  /// Power with its canonical class: OM for p in [0,1], OMDPos for
  /// p in [-1,0), None otherwise.
  static ScalarFunctionSpec power(double p);
  static ScalarFunctionSpec power(double p, FunctionClass declared);
  static ScalarFunctionSpec log();
  static ScalarFunctionSpec neg_inverse();
  static ScalarFunctionSpec resolvent(double lambda);
  static ScalarFunctionSpec neg_resolvent(double lambda);
  static ScalarFunctionSpec monotone_mixture(double alpha, double beta,
                                             std::vector<MixtureTerm> terms);
  static ScalarFunctionSpec decreasing_mixture(double gamma,
                                               std::vector<MixtureTerm> terms);

  const FunctionForm& form() const { return form_; }
  FunctionClass declared_class() const { return declared_; }

  /// True when the form is positive on all of (0, inf) by construction.
  bool positive_valued() const;

  bool operator==(const ScalarFunctionSpec&) const = default;

  /// Canonical textual encoding, e.g. "power:0.5", "resolvent:2",
  /// "dec_mixture:g=1;w=2,l=3|w=0.5,l=0.1". parse(render(s)) == s bit-exact.
  std::string render() const;
  static ScalarFunctionSpec parse(std::string_view text);

 private:
  FunctionForm form_;
  FunctionClass declared_;
};

/// Scalar evaluation; throws DomainViolationError when x <= 0.
double eval_scalar(const ScalarFunctionSpec& f, double x);

/// Functional calculus: U diag(f(w_i)) U* for X = U diag(w_i) U*.
HermitianMatrix apply(const ScalarFunctionSpec& f,
                      const PositiveDefiniteMatrix& x);

/// As apply(), for positive-valued f; the result is validated positive
/// definite. Throws ClassViolationError when f is not positive-valued.
PositiveDefiniteMatrix apply_pd(const ScalarFunctionSpec& f,
                                const PositiveDefiniteMatrix& x);

/// d/dt (lambda + X + tY)^{-1} at t=0, i.e. -R Y R with R = (lambda+X)^{-1}.
HermitianMatrix resolvent_first_derivative(double lambda,
                                           const PositiveDefiniteMatrix& x,
                                           const HermitianMatrix& y);

/// d^2/dt^2 (lambda + X + tY)^{-1} at t=0, i.e. 2 R Y R Y R.
HermitianMatrix resolvent_second_derivative(double lambda,
                                            const PositiveDefiniteMatrix& x,
                                            const HermitianMatrix& y);

/// Samples X <= X + P (P positive semidefinite) and checks the declared
/// monotonicity direction of f under functional calculus. One outcome per
/// trial. Throws ClassViolationError when f declares None.
std::vector<CheckOutcome> check_monotonicity_sample(
    const ScalarFunctionSpec& f, Eigen::Index dim, int trials,
    std::uint64_t seed, double tol = kDefaultLoewnerTol);

}  // namespace loewner
