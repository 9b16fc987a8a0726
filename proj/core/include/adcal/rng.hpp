#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "adcal/rational.hpp"

namespace adcal {

// Wide enough to hold 2^64, the threshold of an event with probability 1.
__extension__ typedef unsigned __int128 Threshold;

// The project's only source of randomness: std::mt19937_64 seeded with the
// caller's 64-bit seed. The engine's output sequence is fixed by the C++
// standard; all derived draws below use only raw 64-bit outputs, never
// <random> distributions, so every stream is identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on {0, ..., n-1} by rejection; consumes one or more outputs.
  std::uint64_t uniform_index(std::uint64_t n);

  // Threshold t with: u < t  <=>  u / 2^64 < p, for a 64-bit draw u.
  static Threshold threshold(const Rational& p);

  // True with probability exactly p (one output consumed).
  bool bernoulli(const Rational& p) { return next() < threshold(p); }
  bool bernoulli(Threshold t) { return next() < t; }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[uniform_index(items.size())];
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace adcal
