#include "adcal/rng.hpp"

#include <limits>

#include "adcal/errors.hpp"

namespace adcal {

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("uniform_index over an empty range");
  // Largest multiple of n representable; draws at or above it are rejected.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      (std::numeric_limits<std::uint64_t>::max() % n + 1) % n;
  while (true) {
    const std::uint64_t u = next();
    if (u <= limit) return u % n;
  }
}

Threshold Rng::threshold(const Rational& p) {
  if (p.sign() <= 0) return 0;
  if (p >= Rational(1)) return static_cast<Threshold>(1) << 64;
  // ceil(p * 2^64), which fits in 64 bits since p < 1.
  mpz_class scaled = p.raw().get_num();
  scaled <<= 64;
  mpz_class t;
  mpz_cdiv_q(t.get_mpz_t(), scaled.get_mpz_t(), p.raw().get_den().get_mpz_t());
  const std::uint64_t lo = mpz_get_ui(t.get_mpz_t());  // unsigned long is 64-bit
  return static_cast<Threshold>(lo);
}

}  // namespace adcal
