#pragma once

#include <string>

#include <boost/multiprecision/gmp.hpp>

#include "deplab/errors.hpp"

namespace deplab {

// Arbitrary-precision integers and rationals (GMP-backed).  Rationals are
// always stored canonically (reduced, positive denominator).
using Int = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

inline Int numerator(const Rational& r) {
  return Int(boost::multiprecision::numerator(r));
}

inline Int denominator(const Rational& r) {
  return Int(boost::multiprecision::denominator(r));
}

inline Rational make_rational(const Int& num, const Int& den) {
  if (den == 0) throw usage_error("rational with zero denominator");
  return Rational(num) / Rational(den);
}

inline int sign(const Rational& r) { return r.sign(); }

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

// Canonical text form "p/q" (reduced, q > 0); integers render as "p/1".
inline std::string format_rational(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

// Accepts "p/q" or a bare integer "p".
inline Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      if (text.empty()) throw std::runtime_error("empty literal");
      return Rational(Int(text));
    }
    const std::string num_text = text.substr(0, slash);
    const std::string den_text = text.substr(slash + 1);
    if (num_text.empty() || den_text.empty())
      throw std::runtime_error("missing numerator or denominator");
    return make_rational(Int(num_text), Int(den_text));
  } catch (const std::runtime_error&) {
    throw usage_error("malformed rational literal: \"" + text + "\"");
  }
}

}  // namespace deplab
