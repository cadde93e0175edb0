#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loewner/outcome.hpp"

namespace loewner {

/// Default and harsh-mode instance conditioning: random spectra are
/// log-uniform in [1/sqrt(cond_max), sqrt(cond_max)].
inline constexpr double kDefaultCondMax = 1e4;   // spectra in [1e-2, 1e2]
inline constexpr double kHarshCondMax = 1e12;    // spectra in [1e-6, 1e6]
inline constexpr double kDefaultCampaignTol = 1e-9;
inline constexpr double kHarshCampaignTol = 1e-6;

/// Number of trials of the convexity negative control (fixed, per its
/// acceptance contract: at least one violation must surface within these).
inline constexpr int kControlTrials = 500;

std::vector<std::string> all_check_sections();

struct CampaignConfig {
  std::uint64_t seed = 1;
  std::vector<int> dims = {2, 3, 4, 6};
  int trials_per_check = 100;
  /// Unset means the mode default (1e-9, or 1e-6 in harsh mode).
  std::optional<double> tolerance;
  /// Empty means all sections; see all_check_sections().
  std::vector<std::string> checks;
  std::vector<std::string> f_forms = {"resolvent", "power", "dec_mixture"};
  std::vector<std::string> g_forms = {"log", "power", "neg_inverse",
                                      "neg_resolvent", "mon_mixture"};
  std::vector<std::string> maps = {"identity", "state", "congruence_sum",
                                   "pinching"};
  bool harsh_mode = false;
  /// 0 = one worker per hardware thread. The report is identical for any
  /// thread count.
  int threads = 0;
  std::string output_path;

  double effective_tolerance() const;
  double cond_max() const;
  /// Throws ConfigError when any field is out of contract.
  void validate() const;

  std::string to_json(int indent = 2) const;
  static CampaignConfig from_json(const std::string& text);
};

struct CheckAggregate {
  std::string check_id;
  long trials = 0;
  long pass = 0;
  long marginal = 0;
  long fail = 0;
  double worst_margin = 0.0;
  double worst_scale = 0.0;
  std::uint64_t worst_seed = 0;
  std::string worst_instance;
};

/// A negative control demonstrates that the harness can detect violations:
/// it is healthy ("ok") exactly when at least one of its trials Fails.
struct ControlResult {
  std::string check_id;
  long trials = 0;
  long fails = 0;
  std::uint64_t first_fail_seed = 0;
  double worst_margin = 0.0;
  bool ok = false;
};

struct CampaignReport {
  std::string schema_version = "1";
  std::string library_version;
  CampaignConfig config;
  std::vector<CheckAggregate> checks;
  std::vector<ControlResult> negative_controls;
  bool negative_controls_ok = false;
  long theorem_fail_count = 0;
  /// Sample of failing outcomes for reproduction (capped).
  std::vector<CheckOutcome> failures;
  /// Timing is the only nondeterministic content and is serialized under a
  /// single "timing" key so consumers can strip it.
  double wall_ms = 0.0;
  std::vector<std::pair<std::string, double>> per_section_ms;

  std::string to_json(int indent = 2) const;
};

/// Runs the selected check sections over seeded random instances. The
/// report is a deterministic function of the config (timing aside), for any
/// thread count: per-trial randomness is derived as
/// hash(master seed, section id, trial index).
CampaignReport run_campaign(const CampaignConfig& config);

}  // namespace loewner
