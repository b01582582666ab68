#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace relayfb {

/// Seeded random stream with portable draw semantics.
///
/// mt19937_64 output is converted to doubles explicitly instead of going
/// through the standard <random> distributions, whose algorithms are
/// implementation-defined. A given seed therefore produces the same draw
/// sequence on every platform, which the simulator's determinism contract
/// relies on.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Stream for worker `index` of a partitioned job. Distinct indices give
  /// decorrelated streams for the same base seed.
  static RandomStream substream(std::uint64_t seed, std::uint64_t index) {
    return RandomStream(mix(seed + 0x9E3779B97F4A7C15ull * (index + 1)));
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Exponential with the given mean (inverse-CDF transform).
  double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

  bool bernoulli(double prob) { return uniform01() < prob; }

 private:
  // splitmix64 finalizer; spreads nearby seeds across the state space.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace relayfb
