#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace loewner {

/// Seeded random source. The engine is std::mt19937_64 (fully specified by
/// the standard); all value transforms are done here rather than with
/// std::*_distribution so that streams do not depend on the standard
/// library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53 bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  /// Standard normal via Box-Muller; consumes two uniforms per call.
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(6.283185307179586476925286766559 * u2);
  }

  /// Uniform integer in [0, n). Modulo bias is irrelevant for test sampling.
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b));
}

/// Per-trial seed: hash of (master seed, check id, trial index). Used by the
/// campaign runner so trials are independent of execution order.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::uint64_t index) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return splitmix64(master ^ splitmix64(h) ^
                    splitmix64(index * 0x9E3779B97F4A7C15ull));
}

}  // namespace loewner
