#pragma once

#include <cmath>
#include <cstdint>

namespace burrow {

// Counter-based deterministic RNG: every draw is a pure hash of
// (seed, key..., counter), so draws are independent of call order,
// thread count, and process history.

inline constexpr uint64_t kRngGamma = 0x9e3779b97f4a7c15ull;

inline uint64_t mix64(uint64_t x) {
  x += kRngGamma;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline uint64_t hash_key(uint64_t h, uint64_t k) { return mix64(h ^ mix64(k)); }

template <typename... Keys>
inline uint64_t rng_hash(uint64_t seed, Keys... keys) {
  uint64_t h = mix64(seed);
  ((h = hash_key(h, static_cast<uint64_t>(keys))), ...);
  return h;
}

// 53-bit mantissa draws; u01 in [0,1), u01_open in (0,1] (log-safe).
inline double u01(uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }
inline double u01_open(uint64_t h) { return static_cast<double>((h >> 11) + 1) * 0x1.0p-53; }

inline double uniform(uint64_t h, double lo, double hi) { return lo + (hi - lo) * u01(h); }

/// Sequential stream view over the counter space (seed, stream) fixed.
struct RngStream {
  uint64_t seed = 0;
  uint64_t stream = 0;
  uint64_t counter = 0;

  RngStream() = default;
  RngStream(uint64_t seed_, uint64_t stream_) : seed(seed_), stream(stream_) {}

  uint64_t next_u64() { return rng_hash(seed, stream, counter++); }
  double next_u01() { return u01(next_u64()); }
  double next_uniform(double lo, double hi) { return uniform(next_u64(), lo, hi); }

  // Box-Muller, cosine branch only; consumes two counter slots per draw.
  double next_normal() {
    const double u1 = u01_open(next_u64());
    const double u2 = u01(next_u64());
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }
};

}  // namespace burrow
