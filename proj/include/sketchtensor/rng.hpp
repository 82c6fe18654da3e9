#pragma once

#include <cstdint>

namespace sketchtensor {

/// SplitMix64 generator (Steele, Lea & Flood 2014; public-domain constants).
///
/// Every random draw in this project flows through this generator so that
/// hash maps, initial vectors, and synthetic data are bit-reproducible from
/// a 64-bit seed, independent of platform or standard-library version.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound) via Lemire's multiply-shift reduction.
  /// Bias is bounded by bound/2^64, far below anything observable here.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<__uint128_t>(next()) * bound) >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  /// Standard normal via Box-Muller; one spare value is cached.
  double next_gaussian();

  /// One mixing step applied to a value; used to derive child seeds.
  static std::uint64_t mix(std::uint64_t v) { return SplitMix64(v).next(); }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sketchtensor
