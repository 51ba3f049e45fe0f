#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cwip {

/// Seeded random source. Every worker owns its own instance.
///
/// Uniform variates are produced from the raw 64-bit engine output so that
/// streams are identical across standard library implementations; only
/// poisson() defers to the standard distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t poisson(double mean);

  bool bernoulli(double p) { return uniform() < p; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Sub-seed for a (master seed, purpose tag, replica index) triple. The tag is
/// hashed with FNV-1a, then the three words are folded through mix64.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index = 0);

}  // namespace cwip
