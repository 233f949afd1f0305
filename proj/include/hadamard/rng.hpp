#pragma once

#include <cmath>
#include <cstdint>

namespace hadamard {

/// Deterministic 64-bit SplitMix stream.
///
/// Every randomized routine in the library (set sampling, property suites,
/// subsequence masks) draws from this generator so that a (seed, call order)
/// pair reproduces byte-identical results across platforms and languages.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 mantissa bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Uniform integer in [0, n). Modulo bias is negligible for the small n
  /// used here and keeps the stream layout trivial to reproduce.
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  /// Standard normal deviate (Box-Muller, one value per pair of uniforms).
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925287 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// Derive an independent stream for a sub-task without disturbing this one.
  SplitMix64 fork(std::uint64_t salt) const { return SplitMix64(state_ ^ (0xD1B54A32D192ED03ULL * (salt + 1))); }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace hadamard
