#pragma once

#include <cmath>
#include <cstdint>

namespace deskstereo {

// Counter-based RNG: every draw is a pure function of (seed, counter), so
// render order and thread count cannot change the sample stream.

inline uint64_t hash_mix(uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t seed, uint64_t a, uint64_t b = 0) {
  return hash_mix(hash_mix(seed ^ (a * 0x9e3779b97f4a7c15ull)) ^ b);
}

/// Uniform in (0,1): never exactly 0, safe for log().
inline double uniform01(uint64_t key) {
  return (static_cast<double>(hash_mix(key) >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal via Box-Muller from two decorrelated sub-keys.
inline double normal01(uint64_t key) {
  const double u1 = uniform01(hash_combine(key, 0x6b79u));
  const double u2 = uniform01(hash_combine(key, 0x7139u));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace deskstereo
