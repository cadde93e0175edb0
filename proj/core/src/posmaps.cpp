#include "loewner/posmaps.hpp"

#include <cmath>

#include "loewner/funcalc.hpp"
#include "loewner/text.hpp"

namespace loewner {

namespace {

struct Dims {
  Eigen::Index in;
  Eigen::Index out;
};

Dims dims_of(const MapVariant& v) {
  struct Visitor {
    Dims operator()(const IdentityMap& m) const { return {m.dim, m.dim}; }
    Dims operator()(const CongruenceSumMap& m) const {
      if (m.kraus.empty())
        throw DomainViolationError("congruence_sum needs at least one matrix");
      const Eigen::Index in = m.kraus.front().rows();
      const Eigen::Index out = m.kraus.front().cols();
      for (const auto& k : m.kraus)
        if (k.rows() != in || k.cols() != out)
          throw DimensionMismatchError("congruence_sum matrices disagree in shape");
      return {in, out};
    }
    Dims operator()(const StateMap& m) const { return {m.rho.rows(), 1}; }
    Dims operator()(const PinchingMap& m) const {
      if (m.blocks.empty())
        throw DomainViolationError("pinching needs a nonempty partition");
      Eigen::Index total = 0;
      for (Eigen::Index b : m.blocks) {
        if (b < 1) throw DomainViolationError("pinching blocks must be >= 1");
        total += b;
      }
      return {total, total};
    }
    Dims operator()(const ConjugatedMap& m) const {
      if (m.pre.cols() != m.inner->in_dim())
        throw DimensionMismatchError("conjugated: pre does not fit inner input");
      if (m.post.rows() != m.inner->out_dim())
        throw DimensionMismatchError("conjugated: post does not fit inner output");
      return {m.pre.rows(), m.post.cols()};
    }
    Dims operator()(const DirectSumMap& m) const {
      return {m.first->in_dim() + m.second->in_dim(),
              m.first->out_dim() + m.second->out_dim()};
    }
    Dims operator()(const TraceMap& m) const {
      if (m.dim < 1) throw DomainViolationError("trace map dim must be >= 1");
      if (!(m.c >= 0.0)) throw DomainViolationError("trace weight must be >= 0");
      return {m.dim, 1};
    }
  };
  return std::visit(Visitor{}, v);
}

ComplexMatrix eval(const MapVariant& v, const ComplexMatrix& x);

ComplexMatrix eval_spec(const PositiveMapSpec& spec, const ComplexMatrix& x) {
  return eval(spec.variant(), x);
}

ComplexMatrix eval(const MapVariant& v, const ComplexMatrix& x) {
  struct Visitor {
    const ComplexMatrix& x;
    ComplexMatrix operator()(const IdentityMap&) const { return x; }
    ComplexMatrix operator()(const CongruenceSumMap& m) const {
      ComplexMatrix out = ComplexMatrix::Zero(m.kraus.front().cols(),
                                              m.kraus.front().cols());
      for (const auto& k : m.kraus) out += k.adjoint() * x * k;
      return out;
    }
    ComplexMatrix operator()(const StateMap& m) const {
      ComplexMatrix out(1, 1);
      out(0, 0) = (m.rho * x).trace();
      return out;
    }
    ComplexMatrix operator()(const PinchingMap& m) const {
      ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
      Eigen::Index at = 0;
      for (Eigen::Index b : m.blocks) {
        out.block(at, at, b, b) = x.block(at, at, b, b);
        at += b;
      }
      return out;
    }
    ComplexMatrix operator()(const ConjugatedMap& m) const {
      const ComplexMatrix inner_arg = m.pre.adjoint() * x * m.pre;
      return m.post.adjoint() * eval_spec(*m.inner, inner_arg) * m.post;
    }
    ComplexMatrix operator()(const DirectSumMap& m) const {
      const Eigen::Index m1 = m.first->in_dim();
      const Eigen::Index m2 = m.second->in_dim();
      const double off =
          std::max(x.topRightCorner(m1, m2).cwiseAbs().maxCoeff(),
                   x.bottomLeftCorner(m2, m1).cwiseAbs().maxCoeff());
      const double scale = std::max(x.cwiseAbs().maxCoeff(), 1e-300);
      if (off > kAsymTol * scale)
        throw DomainViolationError(
            "direct-sum input must be block-diagonal for the split " +
            std::to_string(m1) + "+" + std::to_string(m2));
      const Eigen::Index k1 = m.first->out_dim();
      const Eigen::Index k2 = m.second->out_dim();
      ComplexMatrix out = ComplexMatrix::Zero(k1 + k2, k1 + k2);
      out.topLeftCorner(k1, k1) = eval_spec(*m.first, x.topLeftCorner(m1, m1));
      out.bottomRightCorner(k2, k2) =
          eval_spec(*m.second, x.bottomRightCorner(m2, m2));
      return out;
    }
    ComplexMatrix operator()(const TraceMap& m) const {
      ComplexMatrix out(1, 1);
      out(0, 0) = m.c * x.trace();
      return out;
    }
  };
  return std::visit(Visitor{x}, v);
}

}  // namespace

PositiveMapSpec::PositiveMapSpec(MapVariant v) : variant_(std::move(v)) {
  const Dims d = dims_of(variant_);
  in_dim_ = d.in;
  out_dim_ = d.out;
  // Certify strictness on the identity.
  const ComplexMatrix on_identity =
      eval(variant_, ComplexMatrix::Identity(in_dim_, in_dim_));
  const HermitianMatrix h = symmetrize(on_identity);
  const SpectralDecomposition sd = spectral_decompose(h);
  const double lo = sd.eigenvalues.minCoeff();
  const double hi = sd.eigenvalues.maxCoeff();
  strictness_margin_ = lo;
  strictly_positive_ = lo > kStrictTol * std::max(std::abs(lo), std::abs(hi));
}

PositiveMapSpec PositiveMapSpec::identity(Eigen::Index dim) {
  if (dim < 1) throw DomainViolationError("identity map dim must be >= 1");
  return PositiveMapSpec(IdentityMap{dim});
}

PositiveMapSpec PositiveMapSpec::congruence_sum(
    std::vector<ComplexMatrix> kraus) {
  return PositiveMapSpec(CongruenceSumMap{std::move(kraus)});
}

PositiveMapSpec PositiveMapSpec::state(const PositiveDefiniteMatrix& rho) {
  const double tr = rho.base().trace();
  return PositiveMapSpec(StateMap{rho.entries() / tr});
}

PositiveMapSpec PositiveMapSpec::pinching(std::vector<Eigen::Index> blocks) {
  return PositiveMapSpec(PinchingMap{std::move(blocks)});
}

PositiveMapSpec PositiveMapSpec::conjugated(PositiveMapSpec inner,
                                            ComplexMatrix pre,
                                            ComplexMatrix post) {
  return PositiveMapSpec(ConjugatedMap{
      std::make_shared<const PositiveMapSpec>(std::move(inner)),
      std::move(pre), std::move(post)});
}

PositiveMapSpec PositiveMapSpec::direct_sum(PositiveMapSpec first,
                                            PositiveMapSpec second) {
  return PositiveMapSpec(DirectSumMap{
      std::make_shared<const PositiveMapSpec>(std::move(first)),
      std::make_shared<const PositiveMapSpec>(std::move(second))});
}

PositiveMapSpec PositiveMapSpec::trace_functional(Eigen::Index dim, double c) {
  return PositiveMapSpec(TraceMap{dim, c});
}

ComplexMatrix apply_linear(const PositiveMapSpec& phi, const ComplexMatrix& x) {
  if (x.rows() != phi.in_dim() || x.cols() != phi.in_dim())
    throw DimensionMismatchError("apply_linear: input is " +
                                 std::to_string(x.rows()) + "x" +
                                 std::to_string(x.cols()) + ", map expects " +
                                 std::to_string(phi.in_dim()));
  return eval(phi.variant(), x);
}

HermitianMatrix apply_map(const PositiveMapSpec& phi, const HermitianMatrix& x) {
  return symmetrize(apply_linear(phi, x.entries()));
}

PositiveDefiniteMatrix apply_map_pd(const PositiveMapSpec& phi,
                                    const PositiveDefiniteMatrix& x) {
  if (!phi.strictly_positive())
    throw NotStrictlyPositiveError(
        "apply_map_pd requires a strictly positive map");
  return PositiveDefiniteMatrix(apply_map(phi, x.base()));
}

PositiveMapSpec unitalize(const PositiveMapSpec& phi,
                          const PositiveDefiniteMatrix& anchor) {
  if (!phi.strictly_positive())
    throw NotStrictlyPositiveError("unitalize requires a strictly positive map");
  if (anchor.dim() != phi.in_dim())
    throw DimensionMismatchError("unitalize: anchor dim " +
                                 std::to_string(anchor.dim()) +
                                 " vs map input " +
                                 std::to_string(phi.in_dim()));
  const ComplexMatrix pre =
      apply_pd(ScalarFunctionSpec::power(0.5), anchor).entries();
  const PositiveDefiniteMatrix phi_anchor = apply_map_pd(phi, anchor);
  const ComplexMatrix post =
      apply_pd(ScalarFunctionSpec::power(-0.5), phi_anchor).entries();
  PositiveMapSpec out = PositiveMapSpec::conjugated(phi, pre, post);

  const ComplexMatrix check = apply_linear(
      out, ComplexMatrix::Identity(out.in_dim(), out.in_dim()));
  const double err =
      (check - ComplexMatrix::Identity(out.out_dim(), out.out_dim()))
          .cwiseAbs()
          .maxCoeff();
  if (err > kUnitalTol)
    throw ConsistencyError("unitalized map sends I to I only within " +
                           std::to_string(err));
  return out;
}

PositiveMapSpec two_var_freeze(const PositiveMapSpec& phi,
                               const PositiveDefiniteMatrix& f1_of_x,
                               const PositiveMapSpec& psi) {
  if (f1_of_x.dim() != phi.in_dim())
    throw DimensionMismatchError("two_var_freeze: frozen argument dim " +
                                 std::to_string(f1_of_x.dim()) +
                                 " vs map input " +
                                 std::to_string(phi.in_dim()));
  const PositiveDefiniteMatrix frozen = apply_map_pd(phi, f1_of_x);
  if (frozen.dim() != psi.out_dim())
    throw DimensionMismatchError("two_var_freeze: output dims of the two maps "
                                 "must agree");
  const ComplexMatrix c =
      apply_pd(ScalarFunctionSpec::power(0.5), frozen).entries();
  const ComplexMatrix pre =
      ComplexMatrix::Identity(psi.in_dim(), psi.in_dim());
  return PositiveMapSpec::conjugated(psi, pre, c);
}

PositiveMapSpec direct_sum_map(PositiveMapSpec first, PositiveMapSpec second) {
  return PositiveMapSpec::direct_sum(std::move(first), std::move(second));
}

TracialFunctional::TracialFunctional(double c) : c_(c) {
  if (!(c >= 0.0))
    throw DomainViolationError("tracial functional weight must be >= 0");
}

double TracialFunctional::value(const ComplexMatrix& m) const {
  return c_ * m.trace().real();
}

// ---------------------------------------------------------------------------
// Descriptors

bool PositiveMapDescriptor::DirectSum::operator==(const DirectSum& o) const {
  return *first == *o.first && *second == *o.second;
}

std::optional<Eigen::Index> PositiveMapDescriptor::intrinsic_dim() const {
  struct Visitor {
    std::optional<Eigen::Index> operator()(const Identity& d) const {
      return d.dim;
    }
    std::optional<Eigen::Index> operator()(const State&) const { return {}; }
    std::optional<Eigen::Index> operator()(const CongruenceSum&) const {
      return {};
    }
    std::optional<Eigen::Index> operator()(const Pinching& p) const {
      Eigen::Index total = 0;
      for (Eigen::Index b : p.blocks) total += b;
      return total;
    }
    std::optional<Eigen::Index> operator()(const DirectSum& d) const {
      const auto a = d.first->intrinsic_dim();
      const auto b = d.second->intrinsic_dim();
      if (a && b) return *a + *b;
      return {};
    }
    std::optional<Eigen::Index> operator()(const Trace&) const { return {}; }
  };
  return std::visit(Visitor{}, variant_);
}

std::string PositiveMapDescriptor::render() const {
  struct Visitor {
    std::string operator()(const Identity& d) const {
      return d.dim ? "identity:" + std::to_string(*d.dim) : "identity";
    }
    std::string operator()(const State& s) const {
      return s.uniform ? "state:uniform" : "state:seed=" + std::to_string(s.seed);
    }
    std::string operator()(const CongruenceSum& c) const {
      return "congruence_sum:k=" + std::to_string(c.k) +
             ";seed=" + std::to_string(c.seed);
    }
    std::string operator()(const Pinching& p) const {
      std::string out = "pinching:";
      for (size_t i = 0; i < p.blocks.size(); ++i) {
        if (i) out += '+';
        out += std::to_string(p.blocks[i]);
      }
      return out;
    }
    std::string operator()(const DirectSum& d) const {
      return "direct_sum(" + d.first->render() + "," + d.second->render() + ")";
    }
    std::string operator()(const Trace& t) const {
      return "trace:c=" + format_double(t.c);
    }
  };
  return std::visit(Visitor{}, variant_);
}

namespace {

std::uint64_t parse_u64(std::string_view text) {
  std::uint64_t v = 0;
  if (text.empty()) throw ParseError("empty integer token");
  for (char c : text) {
    if (c < '0' || c > '9')
      throw ParseError("bad integer token: '" + std::string(text) + "'");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

// Splits "a,b" at the top-level comma (ignoring nested parentheses).
std::pair<std::string_view, std::string_view> split_pair(std::string_view text) {
  int depth = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    else if (text[i] == ')') --depth;
    else if (text[i] == ',' && depth == 0)
      return {text.substr(0, i), text.substr(i + 1)};
  }
  throw ParseError("direct_sum expects two comma-separated descriptors");
}

}  // namespace

PositiveMapDescriptor PositiveMapDescriptor::parse(std::string_view text) {
  if (text.starts_with("direct_sum(")) {
    if (!text.ends_with(')')) throw ParseError("unterminated direct_sum(...)");
    const auto [a, b] = split_pair(text.substr(11, text.size() - 12));
    return PositiveMapDescriptor(DirectSum{
        std::make_shared<const PositiveMapDescriptor>(parse(a)),
        std::make_shared<const PositiveMapDescriptor>(parse(b))});
  }
  const size_t colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view rest =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

  if (head == "identity") {
    if (rest.empty()) return PositiveMapDescriptor(Identity{});
    const auto dim = static_cast<Eigen::Index>(parse_u64(rest));
    if (dim < 1) throw ParseError("identity dim must be >= 1");
    return PositiveMapDescriptor(Identity{dim});
  }
  if (head == "state") {
    if (rest == "uniform") return PositiveMapDescriptor(State{true, 0});
    if (rest.starts_with("seed="))
      return PositiveMapDescriptor(State{false, parse_u64(rest.substr(5))});
    throw ParseError("state expects 'uniform' or 'seed=<n>'");
  }
  if (head == "congruence_sum") {
    const auto parts = split(rest, ';');
    if (parts.size() != 2 || !parts[0].starts_with("k=") ||
        !parts[1].starts_with("seed="))
      throw ParseError("congruence_sum expects 'k=<n>;seed=<n>'");
    const int k = static_cast<int>(parse_u64(parts[0].substr(2)));
    if (k < 1) throw ParseError("congruence_sum needs k >= 1");
    return PositiveMapDescriptor(
        CongruenceSum{k, parse_u64(parts[1].substr(5))});
  }
  if (head == "pinching") {
    std::vector<Eigen::Index> blocks;
    for (std::string_view b : split(rest, '+')) {
      const auto size = static_cast<Eigen::Index>(parse_u64(b));
      if (size < 1) throw ParseError("pinching blocks must be >= 1");
      blocks.push_back(size);
    }
    if (blocks.empty()) throw ParseError("pinching needs a partition");
    return PositiveMapDescriptor(Pinching{std::move(blocks)});
  }
  if (head == "trace") {
    if (!rest.starts_with("c=")) throw ParseError("trace expects 'c=<value>'");
    const double c = parse_double(rest.substr(2));
    if (!(c >= 0.0)) throw ParseError("trace weight must be >= 0");
    return PositiveMapDescriptor(Trace{c});
  }
  throw ParseError("unknown map descriptor: '" + std::string(head) + "'");
}

namespace {

ComplexMatrix random_kraus(Eigen::Index dim, Rng& rng, double sv_floor) {
  // U diag(s) V* with singular values bounded away from zero, so the
  // resulting congruence map is strictly positive.
  const ComplexMatrix u = random_unitary(dim, rng);
  const ComplexMatrix v = random_unitary(dim, rng);
  RealVector s(dim);
  for (Eigen::Index i = 0; i < dim; ++i) s[i] = rng.uniform(sv_floor, 2.0);
  return u * s.asDiagonal().toDenseMatrix().cast<Complex>() * v.adjoint();
}

}  // namespace

PositiveMapSpec PositiveMapDescriptor::materialize(Eigen::Index in_dim) const {
  if (in_dim < 1)
    throw DomainViolationError("materialize: ambient dim must be >= 1");
  const auto fixed = intrinsic_dim();
  struct Visitor {
    Eigen::Index dim;
    PositiveMapSpec operator()(const Identity&) const {
      return PositiveMapSpec::identity(dim);
    }
    PositiveMapSpec operator()(const State& s) const {
      if (s.uniform) {
        RealVector w = RealVector::Constant(dim, 1.0);
        return PositiveMapSpec::state(
            PositiveDefiniteMatrix(HermitianMatrix::diagonal(w)));
      }
      Rng rng(mix_seed(s.seed, 0x57A7Eull));
      return PositiveMapSpec::state(random_pd(dim, 100.0, rng));
    }
    PositiveMapSpec operator()(const CongruenceSum& c) const {
      Rng rng(mix_seed(c.seed, 0xC049ull));
      std::vector<ComplexMatrix> kraus;
      kraus.reserve(static_cast<size_t>(c.k));
      for (int i = 0; i < c.k; ++i)
        kraus.push_back(random_kraus(dim, rng, 0.1));
      return PositiveMapSpec::congruence_sum(std::move(kraus));
    }
    PositiveMapSpec operator()(const Pinching& p) const {
      return PositiveMapSpec::pinching(p.blocks);
    }
    PositiveMapSpec operator()(const DirectSum& d) const {
      const auto a_dim = d.first->intrinsic_dim();
      const auto b_dim = d.second->intrinsic_dim();
      Eigen::Index m;
      if (a_dim)
        m = *a_dim;
      else if (b_dim)
        m = dim - *b_dim;
      else if (dim % 2 == 0)
        m = dim / 2;  // even split when neither side pins a dimension
      else
        throw DomainViolationError(
            "direct_sum of dimensionless descriptors needs an even ambient dim");
      if (m < 1 || dim - m < 1)
        throw DimensionMismatchError("direct_sum split does not fit dim " +
                                     std::to_string(dim));
      return PositiveMapSpec::direct_sum(d.first->materialize(m),
                                         d.second->materialize(dim - m));
    }
    PositiveMapSpec operator()(const Trace& t) const {
      return PositiveMapSpec::trace_functional(dim, t.c);
    }
  };
  if (fixed && *fixed != in_dim)
    throw DimensionMismatchError("descriptor pins dim " +
                                 std::to_string(*fixed) + " but was given " +
                                 std::to_string(in_dim));
  return std::visit(Visitor{in_dim}, variant_);
}

}  // namespace loewner
