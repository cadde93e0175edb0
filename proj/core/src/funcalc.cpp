#include "loewner/funcalc.hpp"

#include <cmath>
#include <sstream>

#include "loewner/text.hpp"

namespace loewner {

namespace {

void validate_terms(const std::vector<MixtureTerm>& terms) {
  for (const auto& t : terms) {
    if (!(t.weight > 0.0))
      throw DomainViolationError("mixture term weight must be > 0");
    if (!(t.lambda >= 0.0))
      throw DomainViolationError("mixture term lambda must be >= 0");
  }
}

void validate_form(const FunctionForm& form) {
  if (const auto* r = std::get_if<ResolventForm>(&form)) {
    if (!(r->lambda >= 0.0))
      throw DomainViolationError("resolvent lambda must be >= 0");
  } else if (const auto* r = std::get_if<NegResolventForm>(&form)) {
    if (!(r->lambda >= 0.0))
      throw DomainViolationError("neg_resolvent lambda must be >= 0");
  } else if (const auto* m = std::get_if<MonotoneMixtureForm>(&form)) {
    if (!(m->beta >= 0.0))
      throw DomainViolationError("mon_mixture beta must be >= 0");
    validate_terms(m->terms);
  } else if (const auto* m = std::get_if<DecreasingMixtureForm>(&form)) {
    if (!(m->gamma >= 0.0))
      throw DomainViolationError("dec_mixture gamma must be >= 0");
    if (m->gamma == 0.0 && m->terms.empty())
      throw DomainViolationError("dec_mixture must be strictly positive");
    validate_terms(m->terms);
  } else if (const auto* p = std::get_if<PowerForm>(&form)) {
    if (!std::isfinite(p->exponent))
      throw DomainViolationError("power exponent must be finite");
  }
}

bool class_allowed(const FunctionForm& form, FunctionClass cls) {
  struct Visitor {
    FunctionClass cls;
    bool operator()(const PowerForm& p) const {
      switch (cls) {
        case FunctionClass::OM: return p.exponent >= 0.0 && p.exponent <= 1.0;
        case FunctionClass::OMDPos:
          return p.exponent >= -1.0 && p.exponent <= 0.0;
        case FunctionClass::None: return true;  // negative-control family
      }
      return false;
    }
    bool operator()(const LogForm&) const { return cls == FunctionClass::OM; }
    bool operator()(const NegInverseForm&) const {
      return cls == FunctionClass::OM;
    }
    bool operator()(const ResolventForm&) const {
      return cls == FunctionClass::OMDPos;
    }
    bool operator()(const NegResolventForm&) const {
      return cls == FunctionClass::OM;
    }
    bool operator()(const MonotoneMixtureForm&) const {
      return cls == FunctionClass::OM;
    }
    bool operator()(const DecreasingMixtureForm&) const {
      return cls == FunctionClass::OMDPos;
    }
  };
  return std::visit(Visitor{cls}, form);
}

std::string render_terms(const std::vector<MixtureTerm>& terms) {
  std::string out;
  for (size_t i = 0; i < terms.size(); ++i) {
    if (i) out += '|';
    out += "w=" + format_double(terms[i].weight) +
           ",l=" + format_double(terms[i].lambda);
  }
  return out;
}

std::vector<MixtureTerm> parse_terms(std::string_view text) {
  std::vector<MixtureTerm> terms;
  if (text.empty()) return terms;
  for (std::string_view part : split(text, '|')) {
    const auto kv = split(part, ',');
    if (kv.size() != 2 || !kv[0].starts_with("w=") || !kv[1].starts_with("l="))
      throw ParseError("bad mixture term: '" + std::string(part) + "'");
    terms.push_back({parse_double(kv[0].substr(2)), parse_double(kv[1].substr(2))});
  }
  return terms;
}

}  // namespace

const char* to_string(FunctionClass c) {
  switch (c) {
    case FunctionClass::OM: return "om";
    case FunctionClass::OMDPos: return "omd_pos";
    case FunctionClass::None: return "none";
  }
  return "?";
}

ScalarFunctionSpec::ScalarFunctionSpec(FunctionForm form, FunctionClass declared)
    : form_(std::move(form)), declared_(declared) {
  validate_form(form_);
  if (!class_allowed(form_, declared_))
    throw ClassViolationError("form does not admit the declared class " +
                              std::string(to_string(declared_)));
}

ScalarFunctionSpec ScalarFunctionSpec::power(double p) {
  FunctionClass cls = FunctionClass::None;
  if (p >= 0.0 && p <= 1.0)
    cls = FunctionClass::OM;
  else if (p >= -1.0 && p < 0.0)
    cls = FunctionClass::OMDPos;
  return ScalarFunctionSpec(PowerForm{p}, cls);
}

ScalarFunctionSpec ScalarFunctionSpec::power(double p, FunctionClass declared) {
  return ScalarFunctionSpec(PowerForm{p}, declared);
}

ScalarFunctionSpec ScalarFunctionSpec::log() {
  return ScalarFunctionSpec(LogForm{}, FunctionClass::OM);
}

ScalarFunctionSpec ScalarFunctionSpec::neg_inverse() {
  return ScalarFunctionSpec(NegInverseForm{}, FunctionClass::OM);
}

ScalarFunctionSpec ScalarFunctionSpec::resolvent(double lambda) {
  return ScalarFunctionSpec(ResolventForm{lambda}, FunctionClass::OMDPos);
}

ScalarFunctionSpec ScalarFunctionSpec::neg_resolvent(double lambda) {
  return ScalarFunctionSpec(NegResolventForm{lambda}, FunctionClass::OM);
}

ScalarFunctionSpec ScalarFunctionSpec::monotone_mixture(
    double alpha, double beta, std::vector<MixtureTerm> terms) {
  return ScalarFunctionSpec(MonotoneMixtureForm{alpha, beta, std::move(terms)},
                            FunctionClass::OM);
}

ScalarFunctionSpec ScalarFunctionSpec::decreasing_mixture(
    double gamma, std::vector<MixtureTerm> terms) {
  return ScalarFunctionSpec(DecreasingMixtureForm{gamma, std::move(terms)},
                            FunctionClass::OMDPos);
}

bool ScalarFunctionSpec::positive_valued() const {
  struct Visitor {
    bool operator()(const PowerForm&) const { return true; }
    bool operator()(const LogForm&) const { return false; }
    bool operator()(const NegInverseForm&) const { return false; }
    bool operator()(const ResolventForm&) const { return true; }
    bool operator()(const NegResolventForm&) const { return false; }
    bool operator()(const MonotoneMixtureForm& m) const {
      // Sufficient condition: nonnegative offset and something nonzero.
      return m.alpha > 0.0 ||
             (m.alpha == 0.0 && (m.beta > 0.0 || !m.terms.empty()));
    }
    bool operator()(const DecreasingMixtureForm&) const { return true; }
  };
  return std::visit(Visitor{}, form_);
}

std::string ScalarFunctionSpec::render() const {
  struct Visitor {
    std::string operator()(const PowerForm& p) const {
      return "power:" + format_double(p.exponent);
    }
    std::string operator()(const LogForm&) const { return "log"; }
    std::string operator()(const NegInverseForm&) const { return "neg_inverse"; }
    std::string operator()(const ResolventForm& r) const {
      return "resolvent:" + format_double(r.lambda);
    }
    std::string operator()(const NegResolventForm& r) const {
      return "neg_resolvent:" + format_double(r.lambda);
    }
    std::string operator()(const MonotoneMixtureForm& m) const {
      std::string out = "mon_mixture:a=" + format_double(m.alpha) +
                        ";b=" + format_double(m.beta);
      if (!m.terms.empty()) out += ";" + render_terms(m.terms);
      return out;
    }
    std::string operator()(const DecreasingMixtureForm& m) const {
      std::string out = "dec_mixture:g=" + format_double(m.gamma);
      if (!m.terms.empty()) out += ";" + render_terms(m.terms);
      return out;
    }
  };
  return std::visit(Visitor{}, form_);
}

ScalarFunctionSpec ScalarFunctionSpec::parse(std::string_view text) {
  const size_t colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view rest =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

  if (head == "log") {
    if (!rest.empty()) throw ParseError("log takes no parameters");
    return log();
  }
  if (head == "neg_inverse") {
    if (!rest.empty()) throw ParseError("neg_inverse takes no parameters");
    return neg_inverse();
  }
  if (head == "power") return power(parse_double(rest));
  if (head == "resolvent") return resolvent(parse_double(rest));
  if (head == "neg_resolvent") return neg_resolvent(parse_double(rest));
  if (head == "mon_mixture") {
    const auto parts = split(rest, ';');
    if (parts.size() < 2 || !parts[0].starts_with("a=") ||
        !parts[1].starts_with("b="))
      throw ParseError("mon_mixture expects 'a=..;b=..[;terms]'");
    const double alpha = parse_double(parts[0].substr(2));
    const double beta = parse_double(parts[1].substr(2));
    std::vector<MixtureTerm> terms;
    if (parts.size() > 2) {
      if (parts.size() != 3) throw ParseError("mon_mixture: too many sections");
      terms = parse_terms(parts[2]);
    }
    return monotone_mixture(alpha, beta, std::move(terms));
  }
  if (head == "dec_mixture") {
    const auto parts = split(rest, ';');
    if (parts.empty() || !parts[0].starts_with("g="))
      throw ParseError("dec_mixture expects 'g=..[;terms]'");
    const double gamma = parse_double(parts[0].substr(2));
    std::vector<MixtureTerm> terms;
    if (parts.size() > 1) {
      if (parts.size() != 2) throw ParseError("dec_mixture: too many sections");
      terms = parse_terms(parts[1]);
    }
    return decreasing_mixture(gamma, std::move(terms));
  }
  throw ParseError("unknown function form: '" + std::string(head) + "'");
}

double eval_scalar(const ScalarFunctionSpec& f, double x) {
  if (!(x > 0.0))
    throw DomainViolationError("function argument must be in (0, inf), got " +
                               std::to_string(x));
  struct Visitor {
    double x;
    double operator()(const PowerForm& p) const { return std::pow(x, p.exponent); }
    double operator()(const LogForm&) const { return std::log(x); }
    double operator()(const NegInverseForm&) const { return -1.0 / x; }
    double operator()(const ResolventForm& r) const { return 1.0 / (r.lambda + x); }
    double operator()(const NegResolventForm& r) const {
      return -1.0 / (r.lambda + x);
    }
    double operator()(const MonotoneMixtureForm& m) const {
      double v = m.alpha + m.beta * x;
      for (const auto& t : m.terms) v += t.weight * x / (t.lambda + x);
      return v;
    }
    double operator()(const DecreasingMixtureForm& m) const {
      double v = m.gamma;
      for (const auto& t : m.terms) v += t.weight / (t.lambda + x);
      return v;
    }
  };
  return std::visit(Visitor{x}, f.form());
}

HermitianMatrix apply(const ScalarFunctionSpec& f,
                      const PositiveDefiniteMatrix& x) {
  const SpectralDecomposition sd = spectral_decompose(x.base());
  RealVector mapped(sd.eigenvalues.size());
  for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i)
    mapped[i] = eval_scalar(f, sd.eigenvalues[i]);
  const ComplexMatrix out = sd.eigenvectors *
                            mapped.asDiagonal().toDenseMatrix().cast<Complex>() *
                            sd.eigenvectors.adjoint();
  return symmetrize(out);
}

PositiveDefiniteMatrix apply_pd(const ScalarFunctionSpec& f,
                                const PositiveDefiniteMatrix& x) {
  if (!f.positive_valued())
    throw ClassViolationError("apply_pd needs a positive-valued function, got " +
                              f.render());
  return PositiveDefiniteMatrix(apply(f, x));
}

namespace {

/// (lambda + X)^{-1} through the same spectral path as apply().
ComplexMatrix resolvent_of(double lambda, const PositiveDefiniteMatrix& x) {
  if (!(lambda >= 0.0))
    throw DomainViolationError("resolvent lambda must be >= 0");
  return apply(ScalarFunctionSpec::resolvent(lambda), x).entries();
}

}  // namespace

HermitianMatrix resolvent_first_derivative(double lambda,
                                           const PositiveDefiniteMatrix& x,
                                           const HermitianMatrix& y) {
  if (x.dim() != y.dim())
    throw DimensionMismatchError("resolvent_first_derivative: dims differ");
  const ComplexMatrix r = resolvent_of(lambda, x);
  return symmetrize(-(r * y.entries() * r));
}

HermitianMatrix resolvent_second_derivative(double lambda,
                                            const PositiveDefiniteMatrix& x,
                                            const HermitianMatrix& y) {
  if (x.dim() != y.dim())
    throw DimensionMismatchError("resolvent_second_derivative: dims differ");
  const ComplexMatrix r = resolvent_of(lambda, x);
  const ComplexMatrix ryr = r * y.entries() * r;
  return symmetrize(2.0 * (ryr * y.entries() * r));
}

std::vector<CheckOutcome> check_monotonicity_sample(const ScalarFunctionSpec& f,
                                                    Eigen::Index dim,
                                                    int trials,
                                                    std::uint64_t seed,
                                                    double tol) {
  if (f.declared_class() == FunctionClass::None)
    throw ClassViolationError(
        "monotonicity check requires a declared class, got none for " +
        f.render());
  std::vector<CheckOutcome> outcomes;
  outcomes.reserve(static_cast<size_t>(trials));
  for (int i = 0; i < trials; ++i) {
    const std::uint64_t trial_seed = derive_seed(seed, "monotonicity", i);
    Rng rng(trial_seed);
    const PositiveDefiniteMatrix x = random_pd(dim, 1e4, rng);
    // PSD bump: scaled square of a random Hermitian direction.
    const HermitianMatrix h = random_hermitian(dim, 1.0, rng);
    const double s = rng.uniform(0.1, 2.0);
    const HermitianMatrix bigger = symmetrize(
        x.entries() + s * (h.entries() * h.entries()));
    const PositiveDefiniteMatrix x_plus(bigger);

    const HermitianMatrix fx = apply(f, x);
    const HermitianMatrix fx_plus = apply(f, x_plus);
    const DirectedMargin dm = f.declared_class() == FunctionClass::OM
                                  ? le_margin(fx, fx_plus)
                                  : le_margin(fx_plus, fx);
    outcomes.push_back(outcome_from_margin(
        "monotonicity", trial_seed, dm.margin, dm.scale, tol,
        f.render() + " dim=" + std::to_string(dim),
        {{"bump_scale", s}}));
  }
  return outcomes;
}

}  // namespace loewner
