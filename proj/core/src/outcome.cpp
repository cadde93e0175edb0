#include "loewner/outcome.hpp"

namespace loewner {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Marginal: return "marginal";
    case Verdict::Fail: return "fail";
  }
  return "?";
}

Verdict classify(double margin, double tolerance, double scale) {
  if (margin >= 0.0) return Verdict::Pass;
  if (margin >= -tolerance * scale) return Verdict::Marginal;
  return Verdict::Fail;
}

CheckOutcome outcome_from_margin(
    std::string check_id, std::uint64_t seed, double margin, double scale,
    double tolerance, std::string instance,
    std::vector<std::pair<std::string, double>> details) {
  CheckOutcome out;
  out.check_id = std::move(check_id);
  out.instance_seed = seed;
  out.margin = margin;
  out.scale = scale;
  out.tolerance = tolerance;
  out.verdict = classify(margin, tolerance, scale);
  out.instance = std::move(instance);
  out.details = std::move(details);
  return out;
}

}  // namespace loewner
