#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace loewner {

enum class Verdict { Pass, Marginal, Fail };

const char* to_string(Verdict v);

/// Pass when the margin is nonnegative; Marginal when it is negative but
/// within the floating-point band [-tol*scale, 0); Fail below the band.
Verdict classify(double margin, double tolerance, double scale);

/// Result of one verification check on one instance.
struct CheckOutcome {
  std::string check_id;
  std::uint64_t instance_seed = 0;
  Verdict verdict = Verdict::Pass;
  double margin = 0.0;
  double scale = 0.0;
  double tolerance = 0.0;
  /// Short textual description of the instance (function/map/dims).
  std::string instance;
  /// Ordered diagnostics; insertion order is preserved for reporting.
  std::vector<std::pair<std::string, double>> details;
};

CheckOutcome outcome_from_margin(
    std::string check_id, std::uint64_t seed, double margin, double scale,
    double tolerance, std::string instance = {},
    std::vector<std::pair<std::string, double>> details = {});

}  // namespace loewner
