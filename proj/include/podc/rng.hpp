#pragma once

#include <cstdint>
#include <random>

namespace podc {

// std::mt19937_64 output is pinned by the standard, but the standard
// distributions are not. The helpers below draw portably from raw engine
// words so that a seed reproduces the same bytes on every platform.

/// SplitMix64 step; used to derive independent sub-stream seeds.
inline std::uint64_t split_mix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Deterministic seed for sub-stream `stream` of a base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t state = base ^ (0xA0761D6478BD642Full * (stream + 1));
  std::uint64_t s = split_mix64(state);
  return s ^ split_mix64(state);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

/// Uniform integer in [0, n) by rejection; n must be nonzero.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace podc
