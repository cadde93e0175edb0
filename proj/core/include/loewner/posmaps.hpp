#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "loewner/matrix.hpp"

namespace loewner {

/// Strictness certificate: a map is marked strictly positive when
/// min-eig(Phi(I)) > kStrictTol * ||Phi(I)||. For positive maps
/// Phi(X) >= min-eig(X) * Phi(I), so Phi(I) > 0 is sufficient.
inline constexpr double kStrictTol = 1e-8;

/// Unitalized maps must satisfy ||Phi_u(I) - I||_max <= this.
inline constexpr double kUnitalTol = 1e-10;

class PositiveMapSpec;

struct IdentityMap {
  Eigen::Index dim;
};
/// X -> sum_i K_i* X K_i with each K_i of shape in_dim x out_dim.
struct CongruenceSumMap {
  std::vector<ComplexMatrix> kraus;
};
/// X -> Tr(rho X) as a 1x1 matrix; rho positive definite with unit trace.
struct StateMap {
  ComplexMatrix rho;
};
/// X -> sum_b P_b X P_b for the block-diagonal projections of a partition.
struct PinchingMap {
  std::vector<Eigen::Index> blocks;
};
/// T -> post* inner(pre* T pre) post.
struct ConjugatedMap {
  std::shared_ptr<const PositiveMapSpec> inner;
  ComplexMatrix pre;
  ComplexMatrix post;
};
/// Block-diagonal X (+) Y -> diag(Phi(X), Psi(Y)). Inputs must be
/// block-diagonal with respect to the (in_dim(Phi), in_dim(Psi)) split.
struct DirectSumMap {
  std::shared_ptr<const PositiveMapSpec> first;
  std::shared_ptr<const PositiveMapSpec> second;
};
/// X -> c * Tr(X) as a 1x1 matrix, c >= 0.
struct TraceMap {
  Eigen::Index dim;
  double c;
};

using MapVariant = std::variant<IdentityMap, CongruenceSumMap, StateMap,
                                PinchingMap, ConjugatedMap, DirectSumMap,
                                TraceMap>;

/// Descriptor and evaluator of a positive linear map between matrix spaces.
/// Immutable after construction; strictness is certified at construction by
/// evaluating the map on the identity.
class PositiveMapSpec {
 public:
  static PositiveMapSpec identity(Eigen::Index dim);
  static PositiveMapSpec congruence_sum(std::vector<ComplexMatrix> kraus);
  /// rho is normalized to unit trace.
  static PositiveMapSpec state(const PositiveDefiniteMatrix& rho);
  static PositiveMapSpec pinching(std::vector<Eigen::Index> blocks);
  static PositiveMapSpec conjugated(PositiveMapSpec inner, ComplexMatrix pre,
                                    ComplexMatrix post);
  static PositiveMapSpec direct_sum(PositiveMapSpec first,
                                    PositiveMapSpec second);
  static PositiveMapSpec trace_functional(Eigen::Index dim, double c);

  Eigen::Index in_dim() const { return in_dim_; }
  Eigen::Index out_dim() const { return out_dim_; }

  bool strictly_positive() const { return strictly_positive_; }
  /// min-eig of the map applied to the identity.
  double strictness_margin() const { return strictness_margin_; }

  const MapVariant& variant() const { return variant_; }

 private:
  explicit PositiveMapSpec(MapVariant v);

  MapVariant variant_;
  Eigen::Index in_dim_ = 0;
  Eigen::Index out_dim_ = 0;
  double strictness_margin_ = 0.0;
  bool strictly_positive_ = false;
};

/// Raw linear evaluation on an arbitrary complex matrix (used by the
/// linearity probes; no hermitization of input or output).
ComplexMatrix apply_linear(const PositiveMapSpec& phi, const ComplexMatrix& x);

/// Evaluation on a Hermitian argument; the output is Hermitian and is PSD
/// whenever the input is.
HermitianMatrix apply_map(const PositiveMapSpec& phi, const HermitianMatrix& x);

/// Evaluation of a strictly positive map on a positive definite argument.
PositiveDefiniteMatrix apply_map_pd(const PositiveMapSpec& phi,
                                    const PositiveDefiniteMatrix& x);

/// Unitalization of a strictly positive map at a positive anchor:
/// T -> Phi(anchor)^{-1/2} Phi(anchor^{1/2} T anchor^{1/2}) Phi(anchor)^{-1/2}.
/// The result maps I to I within kUnitalTol (verified).
PositiveMapSpec unitalize(const PositiveMapSpec& phi,
                          const PositiveDefiniteMatrix& anchor);

/// Freezes the first variable of the two-variable functional:
/// T -> Phi(f1_of_x)^{1/2} Psi(T) Phi(f1_of_x)^{1/2}.
PositiveMapSpec two_var_freeze(const PositiveMapSpec& phi,
                               const PositiveDefiniteMatrix& f1_of_x,
                               const PositiveMapSpec& psi);

PositiveMapSpec direct_sum_map(PositiveMapSpec first, PositiveMapSpec second);

/// Tracial positive functional tau = c * Tr, c >= 0. On a matrix factor
/// every tracial positive functional has this form.
class TracialFunctional {
 public:
  explicit TracialFunctional(double c);
  double c() const { return c_; }
  /// c * Re Tr(m); the arguments fed to it by the checks have real trace.
  double value(const ComplexMatrix& m) const;

 private:
  double c_;
};

/// Parseable recipe for building a positive map once the ambient input
/// dimension is known. Canonical encodings:
///   "identity" | "identity:3" | "state:uniform" | "state:seed=5"
///   "congruence_sum:k=2;seed=9" | "pinching:2+2" | "trace:c=1"
///   "direct_sum(identity:2,state:seed=1)"
class PositiveMapDescriptor {
 public:
  struct Identity {
    std::optional<Eigen::Index> dim;
    bool operator==(const Identity&) const = default;
  };
  struct State {
    bool uniform = false;
    std::uint64_t seed = 0;
    bool operator==(const State&) const = default;
  };
  struct CongruenceSum {
    int k = 1;
    std::uint64_t seed = 0;
    bool operator==(const CongruenceSum&) const = default;
  };
  struct Pinching {
    std::vector<Eigen::Index> blocks;
    bool operator==(const Pinching&) const = default;
  };
  struct DirectSum {
    std::shared_ptr<const PositiveMapDescriptor> first;
    std::shared_ptr<const PositiveMapDescriptor> second;
    bool operator==(const DirectSum& o) const;
  };
  struct Trace {
    double c = 1.0;
    bool operator==(const Trace&) const = default;
  };
  using Variant =
      std::variant<Identity, State, CongruenceSum, Pinching, DirectSum, Trace>;

  explicit PositiveMapDescriptor(Variant v) : variant_(std::move(v)) {}

  static PositiveMapDescriptor parse(std::string_view text);
  std::string render() const;

  /// Dimension implied by the descriptor itself, when it has one.
  std::optional<Eigen::Index> intrinsic_dim() const;

  /// Builds the map for the given ambient input dimension. Seeded variants
  /// are deterministic in (descriptor, in_dim).
  PositiveMapSpec materialize(Eigen::Index in_dim) const;

  const Variant& variant() const { return variant_; }
  bool operator==(const PositiveMapDescriptor&) const = default;

 private:
  Variant variant_;
};

}  // namespace loewner
