#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gridmon {

/// All randomness flows through named streams derived from one master seed,
/// so a logged seed replays a run exactly.
using RngStream = std::mt19937_64;

/// SplitMix64 finalizer. Stable across platforms; used for seed derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a over bytes. Stable across platforms (unlike std::hash).
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline RngStream derive_stream(std::uint64_t seed, std::string_view name) {
  return RngStream(splitmix64(seed ^ fnv1a64(name)));
}

inline RngStream derive_stream(std::uint64_t seed, std::string_view name,
                               std::uint64_t index) {
  return RngStream(splitmix64(splitmix64(seed ^ fnv1a64(name)) + index));
}

/// Unbiased draw from [0, n) by rejection. n >= 1.
inline std::uint64_t uniform_below(RngStream& rng, std::uint64_t n) {
  const std::uint64_t rem = (std::uint64_t{0} - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t r = rng();
    if (rem == 0 || r < std::uint64_t{0} - rem) return r % n;
  }
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(RngStream& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(RngStream& rng, double p) { return uniform01(rng) < p; }

}  // namespace gridmon
