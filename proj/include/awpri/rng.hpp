#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace awpri {

/// SplitMix64 (Steele, Lea & Flood 2014). The state update and output mix are
/// fixed here so that fixtures can be regenerated bit-for-bit in any language:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// uniform() takes the top 53 bits; normal() is the basic Box-Muller transform
/// consuming two uniforms per draw (the second variate is discarded).
class Rng {
 public:
  static constexpr const char* kVersion = "splitmix64-boxmuller-v1";

  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [0, n). Plain modulo; bias is below 2^-40 for the
  /// sizes used here.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  double normal(double mean = 0.0, double sd = 1.0) {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Independent child stream, e.g. one per k-means restart.
  Rng fork(std::uint64_t stream) const {
    Rng mixer(state_ ^ (stream * 0xD1B54A32D192ED03ULL));
    return Rng(mixer.next());
  }

 private:
  std::uint64_t state_;
};

}  // namespace awpri
