#pragma once

#include <cstdint>
#include <random>

namespace lcm {

/// Portable seeded generator: std::mt19937_64 (whose output sequence is fixed
/// by the standard) with hand-written conversions, so draws are bit-identical
/// across standard libraries. std::*_distribution is deliberately not used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1).
  double uniform_open() {
    double u = 0.0;
    while (u == 0.0) u = uniform();
    return u;
  }
  /// Standard exponential by inversion.
  double exponential();

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Seed of restart `index` under base seed `base`: mix64(base ^ mix64(index + 1)).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace lcm
