#pragma once

#include <cstdint>
#include <random>

namespace fra {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic RNG wrapper. Bounded/real draws are implemented by hand so
// that streams are bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on {0, ..., bound-1}, bound >= 1. Rejection sampling, no modulo bias.
  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  // Uniform double in [0, 1).
  double uniform_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Derive an independent child stream, e.g. per (trial, client).
  Rng derive(std::uint64_t a, std::uint64_t b = 0) const {
    std::uint64_t h = seed_;
    h = splitmix64(h ^ splitmix64(a + 0x9e3779b97f4a7c15ULL));
    h = splitmix64(h ^ splitmix64(b + 0x517cc1b727220a95ULL));
    return Rng(h);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace fra
