#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace symflow::rng {

// splitmix64 (Steele/Lea/Flood). The generator, the substream derivation and
// the 53-bit double extraction below are all part of the reproducibility
// contract: identical (seed, index) pairs produce identical points on every
// platform and for every worker count.
struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), 53 significant bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }
};

/// Independent stream for one logical sample index. Streams are keyed by the
/// sample index, not by the physical worker, so results do not depend on how
/// samples are partitioned across threads.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mixer{seed ^ (0xD1B54A32D192ED03ULL * (index + 1))};
  return SplitMix64{mixer.next()};
}

inline std::vector<double> uniform_point(SplitMix64& g, int n, double lo, double hi) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = g.uniform(lo, hi);
  return x;
}

/// Uniform point on the simplex {x >= 0, sum x_i = total} via normalized
/// exponential spacings. next_double() < 1, so the logs are finite.
inline std::vector<double> simplex_point(SplitMix64& g, int n, double total) {
  std::vector<double> x(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    x[i] = -std::log(1.0 - g.next_double());
    sum += x[i];
  }
  for (int i = 0; i < n; ++i) x[i] *= total / sum;
  return x;
}

}  // namespace symflow::rng
