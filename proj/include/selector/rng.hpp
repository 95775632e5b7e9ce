#pragma once

#include <cstdint>
#include <random>

namespace selector {

/// SplitMix64 finalizer; good avalanche, used for seed derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based stream split: child streams are a pure function of
/// (master, stream), so per-read/per-trial results never depend on
/// scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master ^ splitmix64(stream + 0x6A09E667F3BCC909ULL));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(splitmix64(seed)); }

/// Uniform double in [0, 1) built directly from the generator's bits
/// (53-bit mantissa), independent of library distribution internals.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n). n must be >= 1.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  // Rejection-free multiply-shift would bias for huge n; plain modulo of a
  // 64-bit draw is fine at the sizes used here, but keep it unbiased anyway.
  std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

}  // namespace selector
