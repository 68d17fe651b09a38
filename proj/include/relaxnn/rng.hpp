#pragma once

#include <cstdint>

namespace relaxnn {

// splitmix64 finalizer; the basis for every random stream in the project.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Sequential counter-based generator. Streams derived from (seed, stream_tag)
// are independent, and the draw sequence depends only on the seed, so every
// run replays bit-identically.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix64(seed ^ mix64(stream ^ 0x6a09e667f3bcc909ull))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

 private:
  std::uint64_t state_;
};

// Stateless draw addressed by (seed, i, j): the same coordinates always yield
// the same value no matter which thread or order evaluates them.
inline double unit_at(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
  std::uint64_t h = mix64(mix64(mix64(seed) ^ i) ^ (j + 0x517cc1b727220a95ull));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline double uniform_at(std::uint64_t seed, std::uint64_t i, std::uint64_t j,
                         double lo, double hi) {
  return lo + (hi - lo) * unit_at(seed, i, j);
}

}  // namespace relaxnn
