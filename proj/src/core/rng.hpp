#pragma once

#include <cstdint>
#include <random>

namespace stodi {

// splitmix64 step; used to derive well-separated stream seeds from a user seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Seeds an mt19937_64 from (seed, stream). Distinct streams are independent
// for practical purposes, which lets Monte Carlo samples run on any thread
// layout while remaining bit-reproducible.
inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
  std::uint64_t s = seed + stream * 0x9E3779B97F4A7C15ull;
  return std::mt19937_64(splitmix64(s));
}

// Uniform double in [0,1) with 53 random bits. std::uniform_real_distribution
// is implementation-defined, so outputs would not be stable across standard
// libraries; this is.
inline double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform integer in {0, ..., bound-1} by rejection; stable across platforms.
inline std::uint64_t uniform_below(std::mt19937_64& eng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  for (;;) {
    std::uint64_t r = eng();
    if (r < limit) return r % bound;
  }
}

inline const char* rng_algorithm_name() { return "mt19937_64/splitmix64-streams"; }

}  // namespace stodi
