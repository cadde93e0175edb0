#include "loewner/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "loewner/checks.hpp"
#include "loewner/version.hpp"

namespace loewner {

namespace {

using OrderedJson = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

const std::vector<std::string> kSections = {
    "main_convexity",    "proof_chain",       "harmonic_subadditivity",
    "f_mean_inequality", "mean_subadditivity", "monotonicity",
    "jensen_inequality", "kadison_inequality", "trace_switch",
    "separate_convexity", "lieb_convexity",    "joint_convexity",
    "counterexample"};

const std::set<std::string> kKnownF = {"resolvent", "power", "dec_mixture"};
const std::set<std::string> kKnownG = {"log", "power", "neg_inverse",
                                       "neg_resolvent", "mon_mixture"};
const std::set<std::string> kKnownMaps = {"identity", "state",
                                          "congruence_sum", "pinching"};

double elapsed_ms(Clock::time_point from) {
  return std::chrono::duration<double, std::milli>(Clock::now() - from).count();
}

// --- instance sampling ------------------------------------------------------

std::vector<MixtureTerm> sample_terms(Rng& rng) {
  const int n = 1 + static_cast<int>(rng.below(3));
  std::vector<MixtureTerm> terms;
  terms.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    terms.push_back({rng.log_uniform(0.1, 2.0), rng.log_uniform(0.01, 10.0)});
  return terms;
}

ScalarFunctionSpec sample_f(const std::string& form, Rng& rng) {
  if (form == "resolvent") {
    const double lambda =
        rng.uniform() < 0.25 ? 0.0 : rng.log_uniform(0.01, 10.0);
    return ScalarFunctionSpec::resolvent(lambda);
  }
  if (form == "power") return ScalarFunctionSpec::power(-rng.uniform(0.1, 1.0));
  if (form == "dec_mixture") {
    const double gamma = rng.uniform() < 0.3 ? 0.0 : rng.uniform(0.0, 1.0);
    return ScalarFunctionSpec::decreasing_mixture(gamma, sample_terms(rng));
  }
  throw ConfigError("unknown f form: '" + form + "'");
}

ScalarFunctionSpec sample_g(const std::string& form, Rng& rng) {
  if (form == "log") return ScalarFunctionSpec::log();
  if (form == "power") return ScalarFunctionSpec::power(rng.uniform(0.05, 1.0));
  if (form == "neg_inverse") return ScalarFunctionSpec::neg_inverse();
  if (form == "neg_resolvent") {
    const double lambda =
        rng.uniform() < 0.25 ? 0.0 : rng.log_uniform(0.01, 10.0);
    return ScalarFunctionSpec::neg_resolvent(lambda);
  }
  if (form == "mon_mixture") {
    const double alpha = rng.uniform(-1.0, 1.0);
    const double beta = rng.uniform() < 0.3 ? 0.0 : rng.uniform(0.0, 1.0);
    return ScalarFunctionSpec::monotone_mixture(alpha, beta, sample_terms(rng));
  }
  throw ConfigError("unknown g form: '" + form + "'");
}

ComplexMatrix sample_invertible(Eigen::Index dim, Rng& rng) {
  // Singular values bounded below by 0.1 so the matrix stays invertible.
  const ComplexMatrix u = random_unitary(dim, rng);
  const ComplexMatrix v = random_unitary(dim, rng);
  RealVector s(dim);
  for (Eigen::Index i = 0; i < dim; ++i) s[i] = rng.uniform(0.1, 2.0);
  return u * s.asDiagonal().toDenseMatrix().cast<Complex>() * v.adjoint();
}

PositiveMapSpec sample_map(const std::string& kind, Eigen::Index dim,
                           Rng& rng) {
  if (kind == "identity") return PositiveMapSpec::identity(dim);
  if (kind == "state") return PositiveMapSpec::state(random_pd(dim, 100.0, rng));
  if (kind == "congruence_sum") {
    const int k = 1 + static_cast<int>(rng.below(3));
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) kraus.push_back(sample_invertible(dim, rng));
    return PositiveMapSpec::congruence_sum(std::move(kraus));
  }
  if (kind == "pinching") {
    std::vector<Eigen::Index> blocks;
    Eigen::Index left = dim;
    while (left > 0) {
      const Eigen::Index b =
          1 + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(left)));
      blocks.push_back(b);
      left -= b;
    }
    return PositiveMapSpec::pinching(std::move(blocks));
  }
  throw ConfigError("unknown map kind: '" + kind + "'");
}

int sample_dim(const CampaignConfig& cfg, Rng& rng) {
  return cfg.dims[rng.below(cfg.dims.size())];
}

// --- section runners --------------------------------------------------------

struct ComboLayout {
  long per_combo;
  long n_f, n_g, n_m;
};

long combo_section_trials(const CampaignConfig& cfg) {
  return static_cast<long>(cfg.f_forms.size()) *
         static_cast<long>(cfg.g_forms.size()) *
         static_cast<long>(cfg.maps.size()) * cfg.trials_per_check;
}

long section_trial_count(const std::string& section,
                         const CampaignConfig& cfg) {
  if (section == "main_convexity" || section == "proof_chain")
    return combo_section_trials(cfg);
  if (section == "counterexample") return 1;
  return cfg.trials_per_check;
}

std::vector<CheckOutcome> run_trial(const std::string& section,
                                    const CampaignConfig& cfg, long index) {
  const std::uint64_t seed = derive_seed(cfg.seed, section, index);
  Rng rng(seed);
  const double tol = cfg.effective_tolerance();
  const double cond = cfg.cond_max();

  if (section == "main_convexity" || section == "proof_chain") {
    const long per = cfg.trials_per_check;
    const long combo = index / per;
    const long n_m = static_cast<long>(cfg.maps.size());
    const long n_g = static_cast<long>(cfg.g_forms.size());
    const std::string& map_kind = cfg.maps[combo % n_m];
    const std::string& g_form = cfg.g_forms[(combo / n_m) % n_g];
    const std::string& f_form = cfg.f_forms[combo / (n_m * n_g)];

    const int dim = sample_dim(cfg, rng);
    const ScalarFunctionSpec f = sample_f(f_form, rng);
    const ScalarFunctionSpec g = sample_g(g_form, rng);
    const PositiveMapSpec phi = sample_map(map_kind, dim, rng);
    const PositiveDefiniteMatrix x = random_pd(dim, cond, rng);
    const PositiveDefiniteMatrix y = random_pd(dim, cond, rng);
    const std::string suffix = " map=" + map_kind;

    if (section == "main_convexity") {
      CheckOutcome out = check_main_convexity(g, f, phi, x, y, tol, seed);
      out.instance += suffix;
      return {std::move(out)};
    }

    auto links = check_proof_chain(g, f, phi, x, y, tol, seed);
    CheckOutcome main = check_main_convexity(g, f, phi, x, y, tol, seed);
    main.check_id = "proof_chain:main";
    const bool links_pass = links[0].verdict == Verdict::Pass &&
                            links[1].verdict == Verdict::Pass &&
                            links[2].verdict == Verdict::Pass;
    CheckOutcome meta = outcome_from_margin(
        "proof_chain:composition", seed, main.margin, main.scale, tol,
        main.instance,
        {{"links_all_pass", links_pass ? 1.0 : 0.0}});
    // Composition property: three passing links force the main inequality.
    meta.verdict = (links_pass && main.verdict == Verdict::Fail)
                       ? Verdict::Fail
                       : Verdict::Pass;
    std::vector<CheckOutcome> out;
    for (auto& l : links) {
      l.instance += suffix;
      out.push_back(std::move(l));
    }
    main.instance += suffix;
    meta.instance += suffix;
    out.push_back(std::move(main));
    out.push_back(std::move(meta));
    return out;
  }

  if (section == "harmonic_subadditivity") {
    const int dim = sample_dim(cfg, rng);
    const std::string& kind = cfg.maps[rng.below(cfg.maps.size())];
    const PositiveMapSpec phi = sample_map(kind, dim, rng);
    const PositiveDefiniteMatrix x = random_pd(dim, cond, rng);
    const PositiveDefiniteMatrix y = random_pd(dim, cond, rng);
    auto [outer, inner] = check_harmonic_subadditivity(phi, x, y, tol, seed);
    outer.instance += " map=" + kind;
    inner.instance += " map=" + kind;
    return {std::move(outer), std::move(inner)};
  }

  if (section == "f_mean_inequality") {
    const int dim = sample_dim(cfg, rng);
    const ScalarFunctionSpec f =
        sample_f(cfg.f_forms[rng.below(cfg.f_forms.size())], rng);
    const PositiveDefiniteMatrix x = random_pd(dim, cond, rng);
    const PositiveDefiniteMatrix y = random_pd(dim, cond, rng);
    return {check_f_mean_inequality(f, x, y, tol, seed)};
  }

  if (section == "mean_subadditivity") {
    const int dim = sample_dim(cfg, rng);
    const MeanKind kind = static_cast<MeanKind>(index % 3);
    const std::string& map_kind = cfg.maps[rng.below(cfg.maps.size())];
    const PositiveMapSpec phi = sample_map(map_kind, dim, rng);
    const PositiveDefiniteMatrix x = random_pd(dim, cond, rng);
    const PositiveDefiniteMatrix y = random_pd(dim, cond, rng);
    CheckOutcome out = check_mean_subadditivity(kind, phi, x, y, tol, seed);
    out.instance += " map=" + map_kind;
    return {std::move(out)};
  }

  if (section == "monotonicity") {
    const int dim = sample_dim(cfg, rng);
    const bool from_f = rng.uniform() < 0.5;
    const ScalarFunctionSpec fn =
        from_f ? sample_f(cfg.f_forms[rng.below(cfg.f_forms.size())], rng)
               : sample_g(cfg.g_forms[rng.below(cfg.g_forms.size())], rng);
    auto outs = check_monotonicity_sample(fn, dim, 1, seed, tol);
    return outs;
  }

  if (section == "jensen_inequality" || section == "kadison_inequality") {
    const int dim = sample_dim(cfg, rng);
    const std::string& kind = cfg.maps[rng.below(cfg.maps.size())];
    const PositiveMapSpec phi = sample_map(kind, dim, rng);
    // Spectra kept in [0.1, 10] so the inverse stays tame.
    const PositiveDefiniteMatrix anchor = random_pd(dim, 100.0, rng);
    const PositiveMapSpec unital = unitalize(phi, anchor);
    CheckOutcome out;
    if (section == "jensen_inequality") {
      const PositiveDefiniteMatrix x = random_pd(dim, 100.0, rng);
      out = check_jensen_inverse(unital, x, tol, seed);
    } else {
      const HermitianMatrix b = random_hermitian(dim, 1.0, rng);
      out = check_kadison(unital, b, tol, seed);
    }
    out.instance += " map=" + kind;
    return {std::move(out)};
  }

  if (section == "trace_switch") {
    const int dim = sample_dim(cfg, rng);
    static const char* kTraceFns[3] = {"log", "power:0.5", "power:1"};
    const ScalarFunctionSpec h =
        ScalarFunctionSpec::parse(kTraceFns[index % 3]);
    const PositiveDefiniteMatrix p = random_pd(dim, cond, rng);
    const PositiveDefiniteMatrix q = random_pd(dim, cond, rng);
    return {check_trace_switch(p, q, h, tol, seed)};
  }

  if (section == "separate_convexity") {
    const std::string& phi_kind = cfg.maps[rng.below(cfg.maps.size())];
    std::string psi_kind;
    if (phi_kind == "state") {
      psi_kind = "state";
    } else {
      // Output dims must match, which rules state out for the partner.
      std::vector<std::string> rest;
      for (const auto& m : cfg.maps)
        if (m != "state") rest.push_back(m);
      psi_kind = rest.empty() ? "identity" : rest[rng.below(rest.size())];
    }
    const int m = sample_dim(cfg, rng);
    const int n = phi_kind == "state" ? sample_dim(cfg, rng) : m;
    const PositiveMapSpec phi = sample_map(phi_kind, m, rng);
    const PositiveMapSpec psi = sample_map(psi_kind, n, rng);
    const ScalarFunctionSpec f1 =
        sample_f(cfg.f_forms[rng.below(cfg.f_forms.size())], rng);
    const ScalarFunctionSpec f2 =
        sample_f(cfg.f_forms[rng.below(cfg.f_forms.size())], rng);
    const ScalarFunctionSpec g =
        sample_g(cfg.g_forms[rng.below(cfg.g_forms.size())], rng);
    const FixedVariable fixed =
        index % 2 == 0 ? FixedVariable::First : FixedVariable::Second;
    const int fixed_dim = fixed == FixedVariable::First ? m : n;
    const int free_dim = fixed == FixedVariable::First ? n : m;
    const PositiveDefiniteMatrix fixed_point =
        random_pd(fixed_dim, cond, rng);
    const PositiveDefiniteMatrix p0 = random_pd(free_dim, cond, rng);
    const PositiveDefiniteMatrix p1 = random_pd(free_dim, cond, rng);
    CheckOutcome out = check_separate_convexity(f1, f2, g, phi, psi, fixed,
                                                fixed_point, p0, p1, tol, seed);
    out.instance += " phi=" + phi_kind + " psi=" + psi_kind;
    return {std::move(out)};
  }

  if (section == "lieb_convexity") {
    const int dim = sample_dim(cfg, rng);
    const std::string& kind = cfg.maps[rng.below(cfg.maps.size())];
    const PositiveMapSpec phi = sample_map(kind, dim, rng);
    const double lambda = rng.uniform() < 0.2 ? 0.0 : rng.log_uniform(0.01, 10.0);
    const double mu = rng.uniform() < 0.2 ? 0.0 : rng.log_uniform(0.01, 10.0);
    const TracialFunctional tau(rng.uniform(0.1, 2.0));
    const ComplexMatrix k = sample_invertible(phi.out_dim(), rng);
    const PositiveDefiniteMatrix x = random_pd(dim, cond, rng);
    const HermitianMatrix y = random_hermitian(dim, 1.0, rng);
    CheckOutcome out = check_lieb_convexity(ScalarFunctionSpec::resolvent(lambda),
                                            ScalarFunctionSpec::resolvent(mu),
                                            phi, tau, k, x, y, tol, seed);
    out.instance += " map=" + kind;
    return {std::move(out)};
  }

  if (section == "joint_convexity") {
    const std::string& phi_kind = cfg.maps[rng.below(cfg.maps.size())];
    std::string psi_kind;
    if (phi_kind == "state") {
      psi_kind = "state";
    } else {
      std::vector<std::string> rest;
      for (const auto& m : cfg.maps)
        if (m != "state") rest.push_back(m);
      psi_kind = rest.empty() ? "identity" : rest[rng.below(rest.size())];
    }
    const int m = sample_dim(cfg, rng);
    const int n = phi_kind == "state" ? sample_dim(cfg, rng) : m;
    const PositiveMapSpec phi = sample_map(phi_kind, m, rng);
    const PositiveMapSpec psi = sample_map(psi_kind, n, rng);
    const ScalarFunctionSpec f1 =
        sample_f(cfg.f_forms[rng.below(cfg.f_forms.size())], rng);
    const ScalarFunctionSpec f2 =
        sample_f(cfg.f_forms[rng.below(cfg.f_forms.size())], rng);
    const TracialFunctional tau(rng.uniform(0.1, 2.0));
    const PositiveDefiniteMatrix x1 = random_pd(m, cond, rng);
    const PositiveDefiniteMatrix x2 = random_pd(m, cond, rng);
    const PositiveDefiniteMatrix y1 = random_pd(n, cond, rng);
    const PositiveDefiniteMatrix y2 = random_pd(n, cond, rng);
    CheckOutcome out = check_joint_convexity(f1, f2, phi, psi, tau, x1, y1, x2,
                                             y2, tol, seed);
    out.instance += " phi=" + phi_kind + " psi=" + psi_kind;
    return {std::move(out)};
  }

  if (section == "counterexample") {
    const CounterexampleResult r = reproduce_counterexample();
    const bool ok = r.matches_reference &&
                    r.lambda2 <= -kCounterexampleNegativityFloor;
    const double margin =
        ok ? -r.lambda2 - kCounterexampleNegativityFloor : -1.0;
    return {outcome_from_margin("counterexample", seed, margin, 1.0, tol,
                                "published 2x2 pair",
                                {{"lambda1", r.lambda1},
                                 {"lambda2", r.lambda2},
                                 {"max_entry_error", r.max_entry_error}})};
  }

  throw ConfigError("unknown check section: '" + section + "'");
}

std::vector<CheckOutcome> run_trial_safe(const std::string& section,
                                         const CampaignConfig& cfg,
                                         long index) {
  try {
    return run_trial(section, cfg, index);
  } catch (const std::exception& e) {
    CheckOutcome out = outcome_from_margin(
        section, derive_seed(cfg.seed, section, index), -1.0, 1.0,
        cfg.effective_tolerance(), std::string("exception: ") + e.what(),
        {{"exception", 1.0}});
    out.verdict = Verdict::Fail;
    return {out};
  }
}

// --- negative controls ------------------------------------------------------

CheckOutcome control_power3_trial(const CampaignConfig& cfg, long index) {
  const std::uint64_t seed =
      derive_seed(cfg.seed, "control_power3_convexity", index);
  Rng rng(seed);
  const double tol = cfg.effective_tolerance();
  // g = x^3 (declared class none), f = 1/x, Phi = identity, dim 2: the
  // composed transform is not operator convex, so violations must surface.
  const ScalarFunctionSpec f = ScalarFunctionSpec::resolvent(0.0);
  const ScalarFunctionSpec g = ScalarFunctionSpec::power(3.0);
  const PositiveDefiniteMatrix x = random_pd(2, cfg.cond_max(), rng);
  const PositiveDefiniteMatrix y = random_pd(2, cfg.cond_max(), rng);

  const auto transform = [&](const PositiveDefiniteMatrix& p) {
    return apply(g, apply_pd(f, p));
  };
  const HermitianMatrix lhs = transform(arithmetic_mean(x, y));
  const HermitianMatrix l = transform(x);
  const HermitianMatrix r = transform(y);
  const HermitianMatrix rhs =
      symmetrize((l.entries() + r.entries()) / 2.0);
  const DirectedMargin dm = le_margin(lhs, rhs);
  return outcome_from_margin("control_power3_convexity", seed, dm.margin,
                             dm.scale, tol, "f=resolvent:0 g=power:3 dim=2");
}

CheckOutcome control_geometric_path(const CampaignConfig& cfg) {
  const std::uint64_t seed =
      derive_seed(cfg.seed, "control_geometric_mean_path", 0);
  const CounterexampleResult r = reproduce_counterexample();
  // Claim (g(S)+g(T))/2 >= g(S#T) for g = sqrt; the published pair refutes it.
  const DirectedMargin dm =
      le_margin(HermitianMatrix::zero(2), r.difference);
  return outcome_from_margin("control_geometric_mean_path", seed, dm.margin,
                             dm.scale, cfg.effective_tolerance(),
                             "published 2x2 pair",
                             {{"lambda2", r.lambda2}});
}

// --- parallel driver --------------------------------------------------------

template <typename Fn>
void parallel_for(long n, int threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  const int workers = static_cast<int>(std::min<long>(threads, n));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (long i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  for (auto& th : pool) th.join();
}

void merge_outcome(std::map<std::string, CheckAggregate>& agg,
                   const CheckOutcome& out) {
  CheckAggregate& a = agg[out.check_id];
  if (a.check_id.empty()) {
    a.check_id = out.check_id;
    a.worst_margin = std::numeric_limits<double>::infinity();
  }
  ++a.trials;
  switch (out.verdict) {
    case Verdict::Pass: ++a.pass; break;
    case Verdict::Marginal: ++a.marginal; break;
    case Verdict::Fail: ++a.fail; break;
  }
  if (out.margin < a.worst_margin) {
    a.worst_margin = out.margin;
    a.worst_scale = out.scale;
    a.worst_seed = out.instance_seed;
    a.worst_instance = out.instance;
  }
}

OrderedJson outcome_to_json(const CheckOutcome& o) {
  OrderedJson j;
  j["check_id"] = o.check_id;
  j["instance_seed"] = o.instance_seed;
  j["verdict"] = to_string(o.verdict);
  j["margin"] = o.margin;
  j["scale"] = o.scale;
  j["tolerance"] = o.tolerance;
  j["instance"] = o.instance;
  OrderedJson d = OrderedJson::object();
  for (const auto& [k, v] : o.details) d[k] = v;
  j["details"] = std::move(d);
  return j;
}

}  // namespace

std::vector<std::string> all_check_sections() { return kSections; }

double CampaignConfig::effective_tolerance() const {
  if (tolerance) return *tolerance;
  return harsh_mode ? kHarshCampaignTol : kDefaultCampaignTol;
}

double CampaignConfig::cond_max() const {
  return harsh_mode ? kHarshCondMax : kDefaultCondMax;
}

void CampaignConfig::validate() const {
  if (dims.empty()) throw ConfigError("dims must be nonempty");
  for (int d : dims)
    if (d < 1 || d > 16)
      throw ConfigError("dims must lie in [1, 16], got " + std::to_string(d));
  if (trials_per_check < 1)
    throw ConfigError("trials_per_check must be >= 1, got " +
                      std::to_string(trials_per_check));
  if (tolerance && !(*tolerance > 0.0))
    throw ConfigError("tolerance must be > 0");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  const std::set<std::string> known(kSections.begin(), kSections.end());
  for (const auto& c : checks)
    if (!known.count(c)) throw ConfigError("unknown check section: '" + c + "'");
  if (f_forms.empty() || g_forms.empty() || maps.empty())
    throw ConfigError("f_forms, g_forms and maps must be nonempty");
  for (const auto& f : f_forms)
    if (!kKnownF.count(f)) throw ConfigError("unknown f form: '" + f + "'");
  for (const auto& g : g_forms)
    if (!kKnownG.count(g)) throw ConfigError("unknown g form: '" + g + "'");
  for (const auto& m : maps)
    if (!kKnownMaps.count(m)) throw ConfigError("unknown map kind: '" + m + "'");
}

std::string CampaignConfig::to_json(int indent) const {
  OrderedJson j;
  j["seed"] = seed;
  j["dims"] = dims;
  j["trials_per_check"] = trials_per_check;
  if (tolerance)
    j["tolerance"] = *tolerance;
  else
    j["tolerance"] = nullptr;
  j["checks"] = checks;
  j["f_forms"] = f_forms;
  j["g_forms"] = g_forms;
  j["maps"] = maps;
  j["harsh_mode"] = harsh_mode;
  j["threads"] = threads;
  j["output_path"] = output_path;
  return j.dump(indent);
}

CampaignConfig CampaignConfig::from_json(const std::string& text) {
  OrderedJson j;
  try {
    j = OrderedJson::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  static const std::set<std::string> kKeys = {
      "seed",    "dims",    "trials_per_check", "tolerance",
      "checks",  "f_forms", "g_forms",          "maps",
      "harsh_mode", "threads", "output_path"};
  for (const auto& [key, _] : j.items())
    if (!kKeys.count(key)) throw ConfigError("unknown config key: '" + key + "'");

  CampaignConfig cfg;
  try {
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("dims")) cfg.dims = j["dims"].get<std::vector<int>>();
    if (j.contains("trials_per_check"))
      cfg.trials_per_check = j["trials_per_check"].get<int>();
    if (j.contains("tolerance") && !j["tolerance"].is_null())
      cfg.tolerance = j["tolerance"].get<double>();
    if (j.contains("checks"))
      cfg.checks = j["checks"].get<std::vector<std::string>>();
    if (j.contains("f_forms"))
      cfg.f_forms = j["f_forms"].get<std::vector<std::string>>();
    if (j.contains("g_forms"))
      cfg.g_forms = j["g_forms"].get<std::vector<std::string>>();
    if (j.contains("maps"))
      cfg.maps = j["maps"].get<std::vector<std::string>>();
    if (j.contains("harsh_mode")) cfg.harsh_mode = j["harsh_mode"].get<bool>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    if (j.contains("output_path"))
      cfg.output_path = j["output_path"].get<std::string>();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad config field: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string CampaignReport::to_json(int indent) const {
  OrderedJson j;
  j["schema_version"] = schema_version;
  j["library_version"] = library_version;
  j["config"] = OrderedJson::parse(config.to_json());
  OrderedJson checks_json = OrderedJson::array();
  for (const auto& a : checks) {
    OrderedJson c;
    c["check_id"] = a.check_id;
    c["trials"] = a.trials;
    c["pass"] = a.pass;
    c["marginal"] = a.marginal;
    c["fail"] = a.fail;
    c["worst_margin"] = a.worst_margin;
    c["worst_scale"] = a.worst_scale;
    c["worst_seed"] = a.worst_seed;
    c["worst_instance"] = a.worst_instance;
    checks_json.push_back(std::move(c));
  }
  j["checks"] = std::move(checks_json);
  OrderedJson controls_json = OrderedJson::array();
  for (const auto& c : negative_controls) {
    OrderedJson cc;
    cc["check_id"] = c.check_id;
    cc["trials"] = c.trials;
    cc["fails"] = c.fails;
    cc["first_fail_seed"] = c.first_fail_seed;
    cc["worst_margin"] = c.worst_margin;
    cc["ok"] = c.ok;
    controls_json.push_back(std::move(cc));
  }
  j["negative_controls"] = std::move(controls_json);
  j["negative_controls_ok"] = negative_controls_ok;
  j["theorem_fail_count"] = theorem_fail_count;
  OrderedJson fails_json = OrderedJson::array();
  for (const auto& f : failures) fails_json.push_back(outcome_to_json(f));
  j["failures"] = std::move(fails_json);
  OrderedJson timing;
  timing["wall_ms"] = wall_ms;
  OrderedJson sections = OrderedJson::object();
  for (const auto& [name, ms] : per_section_ms) sections[name] = ms;
  timing["sections"] = std::move(sections);
  j["timing"] = std::move(timing);
  return j.dump(indent);
}

CampaignReport run_campaign(const CampaignConfig& config) {
  config.validate();
  const auto t0 = Clock::now();

  CampaignReport report;
  report.library_version = kLibraryVersion;
  report.config = config;

  const std::vector<std::string> sections =
      config.checks.empty() ? kSections : config.checks;
  const int threads = config.threads == 0
                          ? static_cast<int>(std::max(
                                1u, std::thread::hardware_concurrency()))
                          : config.threads;
  constexpr size_t kFailureSampleCap = 25;

  std::map<std::string, CheckAggregate> agg;
  for (const auto& section : sections) {
    const auto section_start = Clock::now();
    const long n = section_trial_count(section, config);
    std::vector<std::vector<CheckOutcome>> results(
        static_cast<size_t>(n));
    parallel_for(n, threads, [&](long i) {
      results[static_cast<size_t>(i)] = run_trial_safe(section, config, i);
    });
    for (const auto& trial : results)
      for (const auto& out : trial) {
        merge_outcome(agg, out);
        if (out.verdict == Verdict::Fail &&
            report.failures.size() < kFailureSampleCap)
          report.failures.push_back(out);
      }
    report.per_section_ms.emplace_back(section, elapsed_ms(section_start));
  }

  for (const auto& [_, a] : agg) {
    report.checks.push_back(a);
    report.theorem_fail_count += a.fail;
  }

  // Negative controls always run: a harness that cannot fail is not
  // trustworthy evidence.
  {
    const auto control_start = Clock::now();
    ControlResult power3;
    power3.check_id = "control_power3_convexity";
    power3.trials = kControlTrials;
    power3.worst_margin = std::numeric_limits<double>::infinity();
    std::vector<CheckOutcome> outs(kControlTrials);
    parallel_for(kControlTrials, threads, [&](long i) {
      outs[static_cast<size_t>(i)] = control_power3_trial(config, i);
    });
    for (const auto& o : outs) {
      if (o.verdict == Verdict::Fail) {
        if (power3.fails == 0) power3.first_fail_seed = o.instance_seed;
        ++power3.fails;
      }
      power3.worst_margin = std::min(power3.worst_margin, o.margin);
    }
    power3.ok = power3.fails > 0;

    ControlResult geo;
    geo.check_id = "control_geometric_mean_path";
    geo.trials = 1;
    const CheckOutcome geo_out = control_geometric_path(config);
    geo.worst_margin = geo_out.margin;
    if (geo_out.verdict == Verdict::Fail) {
      geo.fails = 1;
      geo.first_fail_seed = geo_out.instance_seed;
    }
    geo.ok = geo.fails > 0;

    report.negative_controls.push_back(std::move(power3));
    report.negative_controls.push_back(std::move(geo));
    report.per_section_ms.emplace_back("negative_controls",
                                       elapsed_ms(control_start));
  }
  report.negative_controls_ok = true;
  for (const auto& c : report.negative_controls)
    if (!c.ok) report.negative_controls_ok = false;

  report.wall_ms = elapsed_ms(t0);
  return report;
}

}  // namespace loewner
