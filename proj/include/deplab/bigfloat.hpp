#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <utility>

#include <mpfr.h>

#include "deplab/config.hpp"
#include "deplab/errors.hpp"
#include "deplab/exact.hpp"

namespace deplab {

// Arbitrary-precision binary floating point (MPFR-backed, RAII).  Each value
// carries its own precision; arithmetic rounds to the widest operand's
// precision with round-to-nearest.  Library routines that need headroom
// compute at an elevated precision and round once at the end.
// Tag for constructing a zero of a given precision; a bare integer argument
// would be ambiguous with the value constructors on platforms where
// mpfr_prec_t is long.
struct Precision {
  mpfr_prec_t bits;
};

class BigFloat {
 public:
  BigFloat() : BigFloat(Precision{config::precision()}) {}

  explicit BigFloat(Precision prec) {
    mpfr_init2(value_, clamp_prec(prec.bits));
    mpfr_set_zero(value_, 1);
  }

  explicit BigFloat(long x, mpfr_prec_t prec = 0) : BigFloat(Precision{pick(prec)}) {
    mpfr_set_si(value_, x, MPFR_RNDN);
  }

  explicit BigFloat(const Rational& r, mpfr_prec_t prec = 0) : BigFloat(Precision{pick(prec)}) {
    mpfr_set_q(value_, r.backend().data(), MPFR_RNDN);
  }

  explicit BigFloat(const Int& z, mpfr_prec_t prec = 0) : BigFloat(Precision{pick(prec)}) {
    mpfr_set_z(value_, z.backend().data(), MPFR_RNDN);
  }

  explicit BigFloat(double x, mpfr_prec_t prec = 0) : BigFloat(Precision{pick(prec)}) {
    mpfr_set_d(value_, x, MPFR_RNDN);
  }

  BigFloat(const BigFloat& other) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }

  BigFloat(BigFloat&& other) noexcept {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_swap(value_, other.value_);
  }

  BigFloat& operator=(const BigFloat& other) {
    if (this != &other) {
      mpfr_set_prec(value_, mpfr_get_prec(other.value_));
      mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
  }

  BigFloat& operator=(BigFloat&& other) noexcept {
    if (this != &other) mpfr_swap(value_, other.value_);
    return *this;
  }

  ~BigFloat() { mpfr_clear(value_); }

  mpfr_srcptr raw() const { return value_; }
  mpfr_ptr raw() { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

  int sign() const { return mpfr_sgn(value_); }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
    BigFloat out(Precision{joint_prec(a, b)});
    mpfr_add(out.value_, a.value_, b.value_, MPFR_RNDN);
    return out;
  }

  friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
    BigFloat out(Precision{joint_prec(a, b)});
    mpfr_sub(out.value_, a.value_, b.value_, MPFR_RNDN);
    return out;
  }

  friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
    BigFloat out(Precision{joint_prec(a, b)});
    mpfr_mul(out.value_, a.value_, b.value_, MPFR_RNDN);
    return out;
  }

  friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    if (b.is_zero()) throw usage_error("division by zero");
    BigFloat out(Precision{joint_prec(a, b)});
    mpfr_div(out.value_, a.value_, b.value_, MPFR_RNDN);
    return out;
  }

  BigFloat operator-() const {
    BigFloat out(Precision{precision()});
    mpfr_neg(out.value_, value_, MPFR_RNDN);
    return out;
  }

  BigFloat& operator+=(const BigFloat& o) { return *this = *this + o; }
  BigFloat& operator-=(const BigFloat& o) { return *this = *this - o; }
  BigFloat& operator*=(const BigFloat& o) { return *this = *this * o; }
  BigFloat& operator/=(const BigFloat& o) { return *this = *this / o; }

  // Exact comparisons: no rounding is involved in comparing two floats, and
  // comparison against a rational uses the exact integer routine.
  friend int compare(const BigFloat& a, const BigFloat& b) {
    return mpfr_cmp(a.value_, b.value_);
  }

  friend int compare(const BigFloat& a, const Rational& b) {
    return mpfr_cmp_q(a.value_, b.backend().data());
  }

  friend int compare(const Rational& a, const BigFloat& b) {
    return -compare(b, a);
  }

  friend bool operator<(const BigFloat& a, const BigFloat& b) { return compare(a, b) < 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return compare(a, b) > 0; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return compare(a, b) >= 0; }
  friend bool operator==(const BigFloat& a, const BigFloat& b) { return compare(a, b) == 0; }
  friend bool operator!=(const BigFloat& a, const BigFloat& b) { return compare(a, b) != 0; }

  friend BigFloat abs(const BigFloat& a) {
    BigFloat out(Precision{a.precision()});
    mpfr_abs(out.value_, a.value_, MPFR_RNDN);
    return out;
  }

  friend BigFloat sqrt(const BigFloat& a) {
    if (a.sign() < 0) throw usage_error("square root of negative value");
    BigFloat out(Precision{a.precision()});
    mpfr_sqrt(out.value_, a.value_, MPFR_RNDN);
    return out;
  }

  friend BigFloat pow_int(const BigFloat& a, long e) {
    BigFloat out(Precision{a.precision()});
    mpfr_pow_si(out.value_, a.value_, e, MPFR_RNDN);
    return out;
  }

  friend BigFloat ldexp2(const BigFloat& a, long e) {
    BigFloat out(Precision{a.precision()});
    mpfr_mul_2si(out.value_, a.value_, e, MPFR_RNDN);
    return out;
  }

  friend BigFloat log2(const BigFloat& a) {
    BigFloat out(Precision{a.precision()});
    mpfr_log2(out.value_, a.value_, MPFR_RNDN);
    return out;
  }

  // Decimal text that round-trips exactly at the value's own precision.
  std::string to_string() const {
    if (!is_finite()) throw usage_error("cannot serialize a non-finite float");
    if (is_zero()) return "0";
    mpfr_exp_t exp = 0;
    char* digits = mpfr_get_str(nullptr, &exp, 10, 0, value_, MPFR_RNDN);
    std::string mant(digits);
    mpfr_free_str(digits);
    std::string sign_part;
    if (!mant.empty() && mant[0] == '-') {
      sign_part = "-";
      mant.erase(0, 1);
    }
    while (mant.size() > 1 && mant.back() == '0') mant.pop_back();
    std::string body = mant.substr(0, 1);
    if (mant.size() > 1) body += "." + mant.substr(1);
    // mpfr_get_str's exponent is relative to a leading radix point; shift by
    // one for the "d.ddd" form used here.
    return sign_part + body + "e" + std::to_string(static_cast<long>(exp - 1));
  }

  static BigFloat from_string(const std::string& text, mpfr_prec_t prec = 0) {
    BigFloat out(Precision{pick(prec)});
    const int rc = mpfr_set_str(out.value_, text.c_str(), 10, MPFR_RNDN);
    if (rc != 0) throw usage_error("malformed float literal: \"" + text + "\"");
    return out;
  }

  // Fixed number of significant decimal digits (for tables and summaries).
  std::string to_decimal(int significant_digits) const {
    char buffer[512];
    const int written = mpfr_snprintf(buffer, sizeof buffer, "%.*Rg",
                                      significant_digits, value_);
    if (written < 0 || written >= static_cast<int>(sizeof buffer)) {
      throw usage_error("float formatting failed");
    }
    return std::string(buffer);
  }

 private:
  static mpfr_prec_t clamp_prec(mpfr_prec_t prec) {
    return std::max<mpfr_prec_t>(prec, MPFR_PREC_MIN);
  }

  static mpfr_prec_t pick(mpfr_prec_t prec) {
    return prec > 0 ? prec : config::precision();
  }

  static mpfr_prec_t joint_prec(const BigFloat& a, const BigFloat& b) {
    return std::max(a.precision(), b.precision());
  }

  mpfr_t value_;
};

// The global comparison tolerance 2^-config::tolerance_log2().
inline BigFloat float_tolerance() {
  BigFloat one(1L);
  return ldexp2(one, -config::tolerance_log2());
}

inline bool approx_zero(const BigFloat& a) {
  return compare(abs(a), float_tolerance()) <= 0;
}

inline bool approx_equal(const BigFloat& a, const BigFloat& b) {
  return approx_zero(a - b);
}

}  // namespace deplab
