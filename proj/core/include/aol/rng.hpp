#pragma once

#include <cstdint>

namespace aol {

// splitmix64 generator with counter-style stream derivation. Sampling
// helpers avoid std::uniform_*_distribution so that draws are identical
// across standard libraries and across runs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Order-sensitive combination of stream tags; mix(a,b,c) != mix(a,c,b).
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a + 0x9e3779b97f4a7c15ull + (b << 6) + (b >> 2);
    return finalize(x ^ b);
  }

  template <typename... Rest>
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b, Rest... rest) {
    return mix(mix(a, b), static_cast<std::uint64_t>(rest)...);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return finalize(state_);
  }

  // [0, 1)
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  bool bernoulli(double p) { return next_unit() < p; }

  // uniform in [0, n); modulo bias is immaterial at simulation scales
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

 private:
  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace aol
