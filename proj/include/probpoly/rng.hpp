#pragma once

// Deterministic randomness. Every random object in the library is a pure
// function of a 64-bit seed; independent copies use child seeds derived by
// the documented counter split below, so experiments replay bit-exactly on
// any platform.
//
// Stream: splitmix64. Probability-2^-b events are decided by drawing exactly
// b fresh bits and accepting on all-zeros, which realizes the probability
// exactly (no floating point, no rejection).

#include <cstdint>
#include <initializer_list>
#include <stdexcept>

namespace probpoly {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Child seed = fold of mix64 over (seed, path words). derive(s, {a}) and
// derive(s, {b}) give independent streams for a != b; nesting extends paths.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(seed);
  std::uint64_t i = 1;
  for (std::uint64_t word : path) {
    s = mix64(s ^ mix64(word + 0x632be59bd9b4e019ULL * i));
    ++i;
  }
  return s;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // top k bits of one draw; k = 0 consumes nothing and returns 0
  std::uint64_t next_bits(int k) {
    if (k == 0) return 0;
    if (k < 0 || k > 64) throw std::invalid_argument("next_bits: k out of range");
    return next_u64() >> (64 - k);
  }

  // true with probability exactly 2^-b (b >= 0; b = 0 always true)
  bool bernoulli_pow2(int b) {
    if (b < 0) throw std::invalid_argument("bernoulli_pow2: negative b");
    while (b > 64) {
      if (next_u64() != 0) return false;
      b -= 64;
    }
    return next_bits(b) == 0;
  }

  // uniform in [0, n) by masked rejection
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("below: empty range");
    if (n == 1) return 0;
    std::uint64_t mask = n - 1;
    mask |= mask >> 1; mask |= mask >> 2; mask |= mask >> 4;
    mask |= mask >> 8; mask |= mask >> 16; mask |= mask >> 32;
    for (;;) {
      std::uint64_t v = next_u64() & mask;
      if (v < n) return v;
    }
  }

 private:
  std::uint64_t state_;
};

inline Rng rng_at(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  return Rng(derive_seed(seed, path));
}

}  // namespace probpoly
