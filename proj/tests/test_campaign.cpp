#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <loewner/campaign.hpp>
#include <loewner/checks.hpp>
#include <nlohmann/json.hpp>

#include "oracles.hpp"

using namespace loewner;

namespace {

std::string strip_timing(const std::string& report_json) {
  auto j = nlohmann::ordered_json::parse(report_json);
  j.erase("timing");
  return j.dump();
}

// For cross-thread-count comparison: the echoed config differs in its
// "threads" field by construction, everything computed must not.
std::string strip_timing_and_threads(const std::string& report_json) {
  auto j = nlohmann::ordered_json::parse(report_json);
  j.erase("timing");
  j["config"].erase("threads");
  return j.dump();
}

CampaignConfig small_config() {
  CampaignConfig cfg;
  cfg.seed = 7;
  cfg.dims = {2, 3};
  cfg.trials_per_check = 5;
  cfg.threads = 1;
  return cfg;
}

}  // namespace

TEST_CASE("config validation rejects out-of-contract values") {
  CampaignConfig cfg = small_config();
  cfg.trials_per_check = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = small_config();
  cfg.dims = {};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.dims = {17};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.dims = {0};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = small_config();
  cfg.tolerance = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = small_config();
  cfg.checks = {"no_such_check"};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = small_config();
  cfg.f_forms = {"power", "cube"};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = small_config();
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config JSON round-trips losslessly") {
  CampaignConfig cfg = small_config();
  cfg.tolerance = 1e-8;
  cfg.checks = {"main_convexity", "trace_switch"};
  cfg.harsh_mode = false;
  cfg.output_path = "somewhere.json";
  const CampaignConfig back = CampaignConfig::from_json(cfg.to_json());
  CHECK(back.to_json() == cfg.to_json());
  CHECK(back.tolerance.has_value());
  CHECK(*back.tolerance == 1e-8);

  // Unset tolerance survives as null, and defaults depend on harsh mode.
  CampaignConfig plain = small_config();
  const CampaignConfig plain_back = CampaignConfig::from_json(plain.to_json());
  CHECK(!plain_back.tolerance.has_value());
  CHECK(plain_back.effective_tolerance() == kDefaultCampaignTol);
  plain.harsh_mode = true;
  CHECK(plain.effective_tolerance() == kHarshCampaignTol);
  CHECK(plain.cond_max() == kHarshCondMax);

  CHECK_THROWS_AS(CampaignConfig::from_json("{"), ConfigError);
  CHECK_THROWS_AS(CampaignConfig::from_json("[1,2]"), ConfigError);
  CHECK_THROWS_AS(CampaignConfig::from_json("{\"sed\": 1}"), ConfigError);
  CHECK_THROWS_AS(CampaignConfig::from_json("{\"trials_per_check\": 0}"),
                  ConfigError);
}

TEST_CASE("campaign reports are deterministic and thread-count independent") {
  CampaignConfig cfg = small_config();
  cfg.checks = {"main_convexity", "harmonic_subadditivity", "trace_switch",
                "lieb_convexity"};
  const CampaignReport a = run_campaign(cfg);
  const CampaignReport b = run_campaign(cfg);
  CHECK(strip_timing(a.to_json()) == strip_timing(b.to_json()));

  cfg.threads = 4;
  const CampaignReport c = run_campaign(cfg);
  CHECK(strip_timing_and_threads(a.to_json()) ==
        strip_timing_and_threads(c.to_json()));
}

TEST_CASE("default campaign has zero theorem failures and live controls") {
  CampaignConfig cfg = small_config();
  cfg.threads = 0;
  const CampaignReport report = run_campaign(cfg);

  CHECK(report.theorem_fail_count == 0);
  for (const auto& agg : report.checks) {
    CHECK(agg.fail == 0);
    CHECK(agg.trials == agg.pass + agg.marginal + agg.fail);
  }

  REQUIRE(report.negative_controls.size() == 2);
  const auto& power3 = report.negative_controls[0];
  CHECK(power3.check_id == "control_power3_convexity");
  CHECK(power3.trials == kControlTrials);
  CHECK(power3.fails >= 1);
  CHECK(power3.ok);
  const auto& geo = report.negative_controls[1];
  CHECK(geo.check_id == "control_geometric_mean_path");
  CHECK(geo.fails == 1);
  CHECK(geo.worst_margin < -1e-3);
  CHECK(report.negative_controls_ok);
}

TEST_CASE("checks filter restricts the sections that run") {
  CampaignConfig cfg = small_config();
  cfg.checks = {"trace_switch"};
  const CampaignReport report = run_campaign(cfg);
  REQUIRE(report.checks.size() == 1);
  CHECK(report.checks[0].check_id == "trace_switch");
  CHECK(report.checks[0].trials == cfg.trials_per_check);
  // Controls run regardless of the filter.
  CHECK(report.negative_controls.size() == 2);
}

TEST_CASE("tolerance monotonicity: a pass stays a pass at looser tolerance") {
  // Re-evaluating stored margins at larger tolerances can only move
  // verdicts toward Pass.
  std::mt19937_64 gen(55);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double margin = u(gen) * 1e-6;
    const double scale = std::abs(u(gen)) * 10.0 + 0.1;
    const double t1 = 1e-9;
    const double t2 = 1e-6;
    const Verdict v1 = classify(margin, t1, scale);
    const Verdict v2 = classify(margin, t2, scale);
    if (v1 == Verdict::Pass) CHECK(v2 == Verdict::Pass);
    if (v1 == Verdict::Marginal) CHECK(v2 != Verdict::Fail);
  }
}

TEST_CASE("homogeneous checks are scale invariant") {
  std::mt19937_64 gen(66);
  const PositiveMapSpec pinch = PositiveMapSpec::pinching({2, 1});
  for (int trial = 0; trial < 10; ++trial) {
    const PositiveDefiniteMatrix x(
        make_hermitian(oracles::random_spd(3, 0.1, 10.0, gen), 1e-9));
    const PositiveDefiniteMatrix y(
        make_hermitian(oracles::random_spd(3, 0.1, 10.0, gen), 1e-9));
    for (const double c : {0.01, 100.0}) {
      const PositiveDefiniteMatrix cx(symmetrize(c * x.entries()));
      const PositiveDefiniteMatrix cy(symmetrize(c * y.entries()));

      const auto [outer, inner] = check_harmonic_subadditivity(pinch, x, y);
      const auto [outer_c, inner_c] =
          check_harmonic_subadditivity(pinch, cx, cy);
      CHECK((outer.verdict == Verdict::Fail) ==
            (outer_c.verdict == Verdict::Fail));
      CHECK((inner.verdict == Verdict::Fail) ==
            (inner_c.verdict == Verdict::Fail));
      // Margins scale linearly with c, relative to the scaled scale.
      if (outer.scale > 0 && outer_c.scale > 0)
        CHECK(outer.margin / outer.scale ==
              doctest::Approx(outer_c.margin / outer_c.scale)
                  .epsilon(1e-6).scale(1.0));

      for (const MeanKind kind :
           {MeanKind::Arithmetic, MeanKind::Harmonic, MeanKind::Geometric}) {
        const CheckOutcome m = check_mean_subadditivity(kind, pinch, x, y);
        const CheckOutcome mc = check_mean_subadditivity(kind, pinch, cx, cy);
        CHECK((m.verdict == Verdict::Fail) == (mc.verdict == Verdict::Fail));
      }
    }
  }
}

TEST_CASE("campaign trial counts follow the combinatorial layout") {
  CampaignConfig cfg = small_config();
  cfg.checks = {"main_convexity"};
  cfg.f_forms = {"resolvent", "power"};
  cfg.g_forms = {"log"};
  cfg.maps = {"identity", "pinching"};
  cfg.trials_per_check = 3;
  const CampaignReport report = run_campaign(cfg);
  REQUIRE(report.checks.size() == 1);
  // 2 f-forms x 1 g-form x 2 maps x 3 trials per combination.
  CHECK(report.checks[0].trials == 12);
}

TEST_CASE("report JSON carries schema version and config echo") {
  CampaignConfig cfg = small_config();
  cfg.checks = {"counterexample"};
  const CampaignReport report = run_campaign(cfg);
  const auto j = nlohmann::ordered_json::parse(report.to_json());
  CHECK(j["schema_version"] == "1");
  CHECK(j["library_version"].is_string());
  CHECK(j["config"]["seed"] == 7);
  CHECK(j["checks"][0]["check_id"] == "counterexample");
  CHECK(j["checks"][0]["pass"] == 1);
  CHECK(j.contains("timing"));
}
