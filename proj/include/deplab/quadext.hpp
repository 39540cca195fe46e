#pragma once

#include <string>

#include "deplab/bigfloat.hpp"
#include "deplab/errors.hpp"
#include "deplab/exact.hpp"

namespace deplab {

// Element a + b*sqrt(d) of a real quadratic field, with rational a, b and a
// fixed squarefree integer radicand d > 1.  Arithmetic is closed within one
// radicand; combining different radicands is a kind error (callers must
// convert to floating point explicitly when they really want that).
struct QuadExt {
  Rational a;
  Rational b;
  Int d;

  QuadExt(Rational a_in, Rational b_in, Int d_in)
      : a(std::move(a_in)), b(std::move(b_in)), d(std::move(d_in)) {
    if (d <= 1) throw usage_error("quadratic radicand must exceed 1");
  }
};

namespace detail {
inline void require_same_radicand(const QuadExt& x, const QuadExt& y) {
  if (x.d != y.d) {
    throw kind_error("mixing square-root extensions over radicands " +
                     x.d.str() + " and " + y.d.str() +
                     "; convert to floating point explicitly instead");
  }
}
}  // namespace detail

inline QuadExt operator+(const QuadExt& x, const QuadExt& y) {
  detail::require_same_radicand(x, y);
  return {x.a + y.a, x.b + y.b, x.d};
}

inline QuadExt operator-(const QuadExt& x, const QuadExt& y) {
  detail::require_same_radicand(x, y);
  return {x.a - y.a, x.b - y.b, x.d};
}

inline QuadExt operator-(const QuadExt& x) { return {-x.a, -x.b, x.d}; }

inline QuadExt operator*(const QuadExt& x, const QuadExt& y) {
  detail::require_same_radicand(x, y);
  return {x.a * y.a + x.b * y.b * Rational(x.d), x.a * y.b + x.b * y.a, x.d};
}

// Sign of a + b*sqrt(d), computed exactly: when a and b disagree in sign the
// comparison reduces to a^2 vs b^2*d (sqrt(d) is irrational, so the two
// sides cannot tie unless a = b = 0).
inline int sign(const QuadExt& x) {
  const int sa = sign(x.a);
  const int sb = sign(x.b);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  const int magnitude = Rational(x.a * x.a).compare(Rational(x.b * x.b * Rational(x.d)));
  return magnitude == 0 ? 0 : (magnitude > 0 ? sa : sb);
}

inline bool is_zero(const QuadExt& x) { return x.a == 0 && x.b == 0; }

inline QuadExt inverse(const QuadExt& x) {
  // 1/(a + b sqrt(d)) = (a - b sqrt(d)) / (a^2 - b^2 d); the norm vanishes
  // only at zero because sqrt(d) is irrational.
  const Rational norm = x.a * x.a - x.b * x.b * Rational(x.d);
  if (norm == 0) throw usage_error("division by zero");
  return {x.a / norm, -x.b / norm, x.d};
}

inline QuadExt operator/(const QuadExt& x, const QuadExt& y) {
  detail::require_same_radicand(x, y);
  return x * inverse(y);
}

inline int compare(const QuadExt& x, const QuadExt& y) {
  detail::require_same_radicand(x, y);
  return sign(x - y);
}

inline int compare(const QuadExt& x, const Rational& r) {
  return sign(QuadExt{x.a - r, x.b, x.d});
}

inline int compare(const Rational& r, const QuadExt& x) { return -compare(x, r); }

inline bool operator==(const QuadExt& x, const QuadExt& y) { return compare(x, y) == 0; }

inline BigFloat to_bigfloat(const QuadExt& x, mpfr_prec_t prec = 0) {
  const mpfr_prec_t target = prec > 0 ? prec : config::precision();
  // Guard digits so the two roundings below stay well inside the target.
  const mpfr_prec_t work = target + 64;
  const BigFloat root = sqrt(BigFloat(x.d, work));
  BigFloat wide = BigFloat(x.a, work) + BigFloat(x.b, work) * root;
  BigFloat out(Precision{target});
  mpfr_set(out.raw(), wide.raw(), MPFR_RNDN);
  return out;
}

inline std::string format_quadext(const QuadExt& x) {
  return format_rational(x.a) + " + " + format_rational(x.b) + "*sqrt(" + x.d.str() + ")";
}

}  // namespace deplab
