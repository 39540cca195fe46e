#pragma once

#include <cstdint>
#include <utility>

#include "deplab/errors.hpp"
#include "deplab/exact.hpp"

namespace deplab {

struct SquarefreeParts {
  Int square_root;  // s
  Int radical;      // d, squarefree
};

// Writes m >= 0 as s^2 * d with d squarefree.  Strategy: strip all divisors
// up to 10^6 by trial division, then certify the remainder r as one of
//   r = 1, a perfect square, a probable prime, or a semiprime p*q with
//   p != q (forced when r < 10^18 has no divisor <= 10^6, is composite, and
//   is not a perfect square).
// Anything larger that resists classification is rejected rather than
// guessed at.
inline SquarefreeParts squarefree_decompose(const Int& m) {
  if (m < 0) throw usage_error("squarefree decomposition needs a non-negative input");
  if (m == 0) return {Int(0), Int(1)};

  Int s = 1, d = 1;
  Int rest = m;

  constexpr std::uint64_t kTrialLimit = 1'000'000;
  if (rest <= Int("18446744073709551615")) {
    std::uint64_t r = rest.convert_to<std::uint64_t>();
    for (std::uint64_t p = 2; p <= kTrialLimit && p * p <= r; p += (p == 2 ? 1 : 2)) {
      if (r % p != 0) continue;
      int exponent = 0;
      while (r % p == 0) {
        r /= p;
        ++exponent;
      }
      for (int i = 0; i < exponent / 2; ++i) s *= p;
      if (exponent % 2 != 0) d *= p;
    }
    rest = r;
  } else {
    for (std::uint64_t p = 2; p <= kTrialLimit; p += (p == 2 ? 1 : 2)) {
      if (!mpz_divisible_ui_p(rest.backend().data(), p)) continue;
      int exponent = 0;
      while (mpz_divisible_ui_p(rest.backend().data(), p)) {
        rest /= p;
        ++exponent;
      }
      for (int i = 0; i < exponent / 2; ++i) s *= p;
      if (exponent % 2 != 0) d *= p;
    }
  }

  if (rest == 1) return {s, d};

  if (mpz_perfect_square_p(rest.backend().data())) {
    Int root;
    mpz_sqrt(root.backend().data(), rest.backend().data());
    return {s * root, d};
  }

  const int primality = mpz_probab_prime_p(rest.backend().data(), 40);
  if (primality > 0) return {s, d * rest};

  // Composite, no factor <= 10^6, not a square: below 10^18 this forces a
  // product of two distinct primes, which is squarefree.
  if (rest < Int("1000000000000000000")) return {s, d * rest};

  throw usage_error("cannot certify a squarefree decomposition for this value");
}

}  // namespace deplab
