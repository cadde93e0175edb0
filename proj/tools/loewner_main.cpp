// Command-line frontend: randomized verification campaigns, the 2x2
// counterexample reproduction, and single checks on user-supplied matrices.

#include <CLI11.hpp>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include <loewner/campaign.hpp>
#include <loewner/checks.hpp>
#include <loewner/matrix_io.hpp>
#include <loewner/text.hpp>
#include <loewner/version.hpp>

namespace {

using namespace loewner;
using OrderedJson = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  for (const auto part : split(text, ','))
    dims.push_back(static_cast<int>(parse_double(part)));
  return dims;
}

std::vector<std::string> parse_list(const std::string& text) {
  std::vector<std::string> out;
  for (const auto part : split(text, ',')) out.emplace_back(part);
  return out;
}

std::string format_matrix(const HermitianMatrix& m) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < m.dim(); ++i) {
    out << "  ";
    for (Eigen::Index j = 0; j < m.dim(); ++j) {
      if (j) out << "  ";
      out << format_complex(m.entries()(i, j));
    }
    out << "\n";
  }
  return out.str();
}

OrderedJson matrix_to_json(const HermitianMatrix& m) {
  OrderedJson rows = OrderedJson::array();
  for (Eigen::Index i = 0; i < m.dim(); ++i) {
    OrderedJson row = OrderedJson::array();
    for (Eigen::Index j = 0; j < m.dim(); ++j)
      row.push_back(format_complex(m.entries()(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

OrderedJson outcome_to_json(const CheckOutcome& o) {
  OrderedJson j;
  j["schema_version"] = "1";
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

// --- verify ------------------------------------------------------------------

struct VerifyOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> dims;
  std::optional<int> trials;
  std::optional<double> tol;
  std::optional<std::string> checks;
  std::optional<std::string> f_forms;
  std::optional<std::string> g_forms;
  std::optional<std::string> maps;
  bool harsh = false;
  std::optional<int> threads;
  std::string out_path;
  bool json = false;
};

CampaignConfig build_config(const VerifyOptions& opt) {
  CampaignConfig cfg;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) throw IoError("cannot open config '" + opt.config_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    cfg = CampaignConfig::from_json(buf.str());
  }
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.dims) cfg.dims = parse_dims(*opt.dims);
  if (opt.trials) cfg.trials_per_check = *opt.trials;
  if (opt.tol) cfg.tolerance = *opt.tol;
  if (opt.checks) cfg.checks = parse_list(*opt.checks);
  if (opt.f_forms) cfg.f_forms = parse_list(*opt.f_forms);
  if (opt.g_forms) cfg.g_forms = parse_list(*opt.g_forms);
  if (opt.maps) cfg.maps = parse_list(*opt.maps);
  if (opt.harsh) cfg.harsh_mode = true;
  if (opt.threads) cfg.threads = *opt.threads;
  if (!opt.out_path.empty()) cfg.output_path = opt.out_path;
  if (cfg.output_path.empty()) cfg.output_path = "loewner_report.json";
  cfg.validate();
  return cfg;
}

int run_verify(const VerifyOptions& opt) {
  const CampaignConfig cfg = build_config(opt);
  const CampaignReport report = run_campaign(cfg);

  const std::string body = report.to_json();
  {
    std::ofstream out(cfg.output_path);
    if (!out) throw IoError("cannot write report to '" + cfg.output_path + "'");
    out << body << "\n";
    if (!out) throw IoError("failed writing '" + cfg.output_path + "'");
  }

  if (opt.json) {
    std::cout << body << "\n";
  } else {
    std::printf("loewner %s  seed=%" PRIu64 "  trials/check=%d  tol=%g%s\n",
                kLibraryVersion, cfg.seed, cfg.trials_per_check,
                cfg.effective_tolerance(), cfg.harsh_mode ? "  [harsh]" : "");
    std::printf("%-34s %7s %7s %9s %6s  %s\n", "check", "trials", "pass",
                "marginal", "fail", "worst margin");
    for (const auto& a : report.checks)
      std::printf("%-34s %7ld %7ld %9ld %6ld  %.3e\n", a.check_id.c_str(),
                  a.trials, a.pass, a.marginal, a.fail, a.worst_margin);
    for (const auto& c : report.negative_controls)
      std::printf("%-34s %7ld fails=%ld (%s)\n", c.check_id.c_str(), c.trials,
                  c.fails, c.ok ? "detects violations" : "DEAD CONTROL");
    std::printf("result: %s  (theorem failures: %ld, controls %s)\n",
                report.theorem_fail_count == 0 && report.negative_controls_ok
                    ? "PASS"
                    : "FAIL",
                report.theorem_fail_count,
                report.negative_controls_ok ? "live" : "dead");
    std::printf("report: %s\n", cfg.output_path.c_str());
  }
  return report.theorem_fail_count == 0 && report.negative_controls_ok
             ? kExitPass
             : kExitFail;
}

// --- counterexample ----------------------------------------------------------

int run_counterexample(bool json) {
  const CounterexampleResult r = reproduce_counterexample();
  if (json) {
    OrderedJson j;
    j["schema_version"] = "1";
    j["s"] = matrix_to_json(r.s);
    j["t"] = matrix_to_json(r.t);
    j["geometric_mean"] = matrix_to_json(r.geo_mean);
    j["difference"] = matrix_to_json(r.difference);
    j["lambda1"] = r.lambda1;
    j["lambda2"] = r.lambda2;
    j["max_entry_error"] = r.max_entry_error;
    j["matches_reference"] = r.matches_reference;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "S =\n" << format_matrix(r.s);
    std::cout << "T =\n" << format_matrix(r.t);
    std::cout << "S # T =\n" << format_matrix(r.geo_mean);
    std::cout << "(sqrt(S) + sqrt(T))/2 - sqrt(S # T) =\n"
              << format_matrix(r.difference);
    std::printf("eigenvalues: lambda1 = %.6f, lambda2 = %.6f\n", r.lambda1,
                r.lambda2);
    std::printf("reference digits matched: %s (max entry error %.2e)\n",
                r.matches_reference ? "yes" : "NO", r.max_entry_error);
    std::printf("lambda2 < 0: %s -- the square-root/geometric-mean route "
                "fails here\n",
                r.lambda2_negative ? "yes" : "NO");
  }
  return r.matches_reference && r.lambda2_negative ? kExitPass : kExitFail;
}

// --- check -------------------------------------------------------------------

struct CheckOptions {
  std::string check_id;
  std::string x_path, y_path, x2_path, y2_path, k_path;
  std::string f_spec, f2_spec, g_spec;
  std::string map_desc, map2_desc;
  std::string mean_name;
  std::string fixed = "first";
  double tau_c = 1.0;
  std::uint64_t seed = 0;
  double tol = kDefaultLoewnerTol;
};

HermitianMatrix need_matrix(const std::string& path, const char* flag) {
  if (path.empty())
    throw ConfigError(std::string("missing required matrix file ") + flag);
  return read_matrix_file(path);
}

PositiveDefiniteMatrix need_pd(const std::string& path, const char* flag) {
  return PositiveDefiniteMatrix(need_matrix(path, flag));
}

ScalarFunctionSpec need_fn(const std::string& text, const char* flag) {
  if (text.empty())
    throw ConfigError(std::string("missing required function spec ") + flag);
  return ScalarFunctionSpec::parse(text);
}

PositiveMapSpec need_map(const std::string& text, Eigen::Index dim,
                         const char* flag) {
  if (text.empty())
    throw ConfigError(std::string("missing required map descriptor ") + flag);
  return PositiveMapDescriptor::parse(text).materialize(dim);
}

std::vector<CheckOutcome> dispatch_check(const CheckOptions& opt) {
  const std::string& id = opt.check_id;
  if (id == "main_convexity" || id == "proof_chain") {
    const PositiveDefiniteMatrix x = need_pd(opt.x_path, "--x");
    const PositiveDefiniteMatrix y = need_pd(opt.y_path, "--y");
    const ScalarFunctionSpec f = need_fn(opt.f_spec, "--f");
    const ScalarFunctionSpec g = need_fn(opt.g_spec, "--g");
    const PositiveMapSpec phi = need_map(opt.map_desc, x.dim(), "--map");
    if (id == "main_convexity")
      return {check_main_convexity(g, f, phi, x, y, opt.tol, opt.seed)};
    const auto links = check_proof_chain(g, f, phi, x, y, opt.tol, opt.seed);
    return {links.begin(), links.end()};
  }
  if (id == "harmonic_subadditivity") {
    const PositiveDefiniteMatrix x = need_pd(opt.x_path, "--x");
    const PositiveDefiniteMatrix y = need_pd(opt.y_path, "--y");
    const PositiveMapSpec phi = need_map(opt.map_desc, x.dim(), "--map");
    const auto [outer, inner] =
        check_harmonic_subadditivity(phi, x, y, opt.tol, opt.seed);
    return {outer, inner};
  }
  if (id == "f_mean_inequality") {
    const PositiveDefiniteMatrix x = need_pd(opt.x_path, "--x");
    const PositiveDefiniteMatrix y = need_pd(opt.y_path, "--y");
    return {check_f_mean_inequality(need_fn(opt.f_spec, "--f"), x, y, opt.tol,
                                    opt.seed)};
  }
  if (id == "mean_subadditivity") {
    const PositiveDefiniteMatrix x = need_pd(opt.x_path, "--x");
    const PositiveDefiniteMatrix y = need_pd(opt.y_path, "--y");
    if (opt.mean_name.empty()) throw ConfigError("missing --mean");
    return {check_mean_subadditivity(parse_mean(opt.mean_name),
                                     need_map(opt.map_desc, x.dim(), "--map"),
                                     x, y, opt.tol, opt.seed)};
  }
  if (id == "trace_switch") {
    const PositiveDefiniteMatrix p = need_pd(opt.x_path, "--x");
    const PositiveDefiniteMatrix q = need_pd(opt.y_path, "--y");
    return {check_trace_switch(p, q, need_fn(opt.f_spec, "--f"), opt.tol,
                               opt.seed)};
  }
  if (id == "jensen_inequality" || id == "kadison_inequality") {
    const PositiveDefiniteMatrix x = need_pd(opt.x_path, "--x");
    const PositiveMapSpec phi = need_map(opt.map_desc, x.dim(), "--map");
    // Any strictly positive map is admitted by unitalizing it at I.
    const PositiveMapSpec unital = unitalize(
        phi, PositiveDefiniteMatrix(HermitianMatrix::identity(phi.in_dim())));
    if (id == "jensen_inequality")
      return {check_jensen_inverse(unital, x, opt.tol, opt.seed)};
    return {check_kadison(unital, x.base(), opt.tol, opt.seed)};
  }
  if (id == "separate_convexity") {
    const PositiveDefiniteMatrix fixed_point = need_pd(opt.x_path, "--x");
    const PositiveDefiniteMatrix p0 = need_pd(opt.y_path, "--y");
    const PositiveDefiniteMatrix p1 = need_pd(opt.y2_path, "--y2");
    const FixedVariable fixed =
        opt.fixed == "second" ? FixedVariable::Second : FixedVariable::First;
    const ScalarFunctionSpec f1 = need_fn(opt.f_spec, "--f");
    const ScalarFunctionSpec f2 = need_fn(opt.f2_spec, "--f2");
    const ScalarFunctionSpec g = need_fn(opt.g_spec, "--g");
    const Eigen::Index phi_dim =
        fixed == FixedVariable::First ? fixed_point.dim() : p0.dim();
    const Eigen::Index psi_dim =
        fixed == FixedVariable::First ? p0.dim() : fixed_point.dim();
    const PositiveMapSpec phi = need_map(opt.map_desc, phi_dim, "--map");
    const PositiveMapSpec psi = need_map(opt.map2_desc, psi_dim, "--map2");
    return {check_separate_convexity(f1, f2, g, phi, psi, fixed, fixed_point,
                                     p0, p1, opt.tol, opt.seed)};
  }
  if (id == "lieb_convexity") {
    const PositiveDefiniteMatrix x = need_pd(opt.x_path, "--x");
    const HermitianMatrix y = need_matrix(opt.y_path, "--y");
    const ScalarFunctionSpec f1 = need_fn(opt.f_spec, "--f");
    const ScalarFunctionSpec f2 = need_fn(opt.f2_spec, "--f2");
    const PositiveMapSpec phi = need_map(opt.map_desc, x.dim(), "--map");
    ComplexMatrix k;
    if (opt.k_path.empty())
      k = ComplexMatrix::Identity(phi.out_dim(), phi.out_dim());
    else
      k = read_matrix_file(opt.k_path).entries();
    return {check_lieb_convexity(f1, f2, phi, TracialFunctional(opt.tau_c), k,
                                 x, y, opt.tol, opt.seed)};
  }
  if (id == "joint_convexity") {
    const PositiveDefiniteMatrix x1 = need_pd(opt.x_path, "--x");
    const PositiveDefiniteMatrix y1 = need_pd(opt.y_path, "--y");
    const PositiveDefiniteMatrix x2 = need_pd(opt.x2_path, "--x2");
    const PositiveDefiniteMatrix y2 = need_pd(opt.y2_path, "--y2");
    const PositiveMapSpec phi = need_map(opt.map_desc, x1.dim(), "--map");
    const PositiveMapSpec psi = need_map(opt.map2_desc, y1.dim(), "--map2");
    return {check_joint_convexity(need_fn(opt.f_spec, "--f"),
                                  need_fn(opt.f2_spec, "--f2"), phi, psi,
                                  TracialFunctional(opt.tau_c), x1, y1, x2, y2,
                                  opt.tol, opt.seed)};
  }
  throw ConfigError("unknown check id: '" + id + "'");
}

int run_check(const CheckOptions& opt) {
  const std::vector<CheckOutcome> outcomes = dispatch_check(opt);
  OrderedJson out;
  if (outcomes.size() == 1) {
    out = outcome_to_json(outcomes.front());
  } else {
    out = OrderedJson::array();
    for (const auto& o : outcomes) out.push_back(outcome_to_json(o));
  }
  std::cout << out.dump(2) << "\n";
  for (const auto& o : outcomes)
    if (o.verdict == Verdict::Fail) return kExitFail;
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix functional calculus, operator means, positive maps, "
               "and randomized Loewner-order inequality verification"};
  app.set_version_flag("--version", kLibraryVersion);
  app.require_subcommand(1);

  VerifyOptions vopt;
  CLI::App* verify = app.add_subcommand(
      "verify", "Run a randomized verification campaign and write a report");
  verify->add_option("--config", vopt.config_path, "Campaign config JSON file");
  std::uint64_t seed_arg = 0;
  CLI::Option* seed_opt = verify->add_option("--seed", seed_arg, "Master seed");
  std::string dims_arg;
  CLI::Option* dims_opt =
      verify->add_option("--dims", dims_arg, "Comma-separated dimensions");
  int trials_arg = 0;
  CLI::Option* trials_opt =
      verify->add_option("--trials", trials_arg, "Trials per check");
  double tol_arg = 0.0;
  CLI::Option* tol_opt =
      verify->add_option("--tol", tol_arg, "Relative Loewner tolerance");
  std::string checks_arg;
  CLI::Option* checks_opt = verify->add_option(
      "--checks", checks_arg, "Comma-separated check sections (default all)");
  std::string f_arg, g_arg, maps_arg;
  CLI::Option* f_opt = verify->add_option("--f-forms", f_arg, "f catalog filter");
  CLI::Option* g_opt = verify->add_option("--g-forms", g_arg, "g catalog filter");
  CLI::Option* m_opt = verify->add_option("--maps", maps_arg, "map catalog filter");
  verify->add_flag("--harsh", vopt.harsh, "Widen spectra to [1e-6, 1e6]");
  int threads_arg = 0;
  CLI::Option* threads_opt =
      verify->add_option("--threads", threads_arg, "Worker threads (0 = auto)");
  verify->add_option("--out", vopt.out_path, "Report output path");
  verify->add_flag("--json", vopt.json, "Print the report JSON to stdout");

  bool cx_json = false;
  CLI::App* counterexample = app.add_subcommand(
      "counterexample",
      "Reproduce the published 2x2 failure of the geometric-mean route");
  counterexample->add_flag("--json", cx_json, "Emit JSON instead of the table");

  CheckOptions copt;
  CLI::App* check = app.add_subcommand(
      "check", "Evaluate one check on user-supplied matrices");
  check->add_option("check_id", copt.check_id, "Check identifier")->required();
  check->add_option("--x", copt.x_path, "Matrix file (X / P / fixed point)");
  check->add_option("--y", copt.y_path, "Matrix file (Y / Q / segment start)");
  check->add_option("--x2", copt.x2_path, "Matrix file (second X)");
  check->add_option("--y2", copt.y2_path, "Matrix file (second Y / segment end)");
  check->add_option("--k", copt.k_path, "Matrix file for K");
  check->add_option("--f", copt.f_spec, "Function spec for f / f1 / h");
  check->add_option("--f2", copt.f2_spec, "Function spec for f2");
  check->add_option("--g", copt.g_spec, "Function spec for g");
  check->add_option("--map", copt.map_desc, "Positive map descriptor");
  check->add_option("--map2", copt.map2_desc, "Second map descriptor");
  check->add_option("--mean", copt.mean_name,
                    "Mean name: arithmetic|harmonic|geometric");
  check->add_option("--fixed", copt.fixed, "Fixed variable: first|second");
  check->add_option("--tau", copt.tau_c, "Tracial functional weight c");
  check->add_option("--seed", copt.seed, "Seed recorded in the outcome");
  check->add_option("--tol", copt.tol, "Relative Loewner tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (verify->parsed()) {
      if (*seed_opt) vopt.seed = seed_arg;
      if (*dims_opt) vopt.dims = dims_arg;
      if (*trials_opt) vopt.trials = trials_arg;
      if (*tol_opt) vopt.tol = tol_arg;
      if (*checks_opt) vopt.checks = checks_arg;
      if (*f_opt) vopt.f_forms = f_arg;
      if (*g_opt) vopt.g_forms = g_arg;
      if (*m_opt) vopt.maps = maps_arg;
      if (*threads_opt) vopt.threads = threads_arg;
      return run_verify(vopt);
    }
    if (counterexample->parsed()) return run_counterexample(cx_json);
    return run_check(copt);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainViolationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DimensionMismatchError& e) {
    std::cerr << "dimension mismatch: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ClassViolationError& e) {
    std::cerr << "class violation: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnknownMeanError& e) {
    std::cerr << "unknown mean: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NotStrictlyPositiveError& e) {
    std::cerr << "map not strictly positive: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NotPositiveDefiniteError& e) {
    std::cerr << "matrix not positive definite: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
