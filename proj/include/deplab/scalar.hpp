#pragma once

#include <string>
#include <utility>
#include <variant>

#include "deplab/bigfloat.hpp"
#include "deplab/errors.hpp"
#include "deplab/exact.hpp"
#include "deplab/quadext.hpp"
#include "deplab/squarefree.hpp"

namespace deplab {

enum class ScalarKind { rational, quadext, bigfloat };

inline const char* kind_name(ScalarKind k) {
  switch (k) {
    case ScalarKind::rational: return "rational";
    case ScalarKind::quadext: return "quadext";
    case ScalarKind::bigfloat: return "bigfloat";
  }
  return "?";
}

inline ScalarKind parse_kind(const std::string& name) {
  if (name == "rational") return ScalarKind::rational;
  if (name == "quadext") return ScalarKind::quadext;
  if (name == "bigfloat") return ScalarKind::bigfloat;
  throw usage_error("unknown scalar kind: \"" + name + "\"");
}

// A probability/value in exactly one of three representations: exact
// rational, exact quadratic extension a + b*sqrt(d), or high-precision float.
// Rationals promote implicitly when mixed with the other two; a quadratic
// extension never silently becomes a float (and two extensions over
// different radicands never combine) — those conversions go through
// to_bigfloat on purpose, so exactness is only ever given up explicitly.
// A quadratic extension with b = 0 normalizes to its rational value on
// construction, so representation never hides equality.
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  Scalar(long x) : value_(Rational(x)) {}  // NOLINT(google-explicit-constructor)
  Scalar(Rational r) : value_(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  Scalar(Int z) : value_(Rational(std::move(z))) {}  // NOLINT(google-explicit-constructor)
  Scalar(QuadExt q) {  // NOLINT(google-explicit-constructor)
    if (q.b == 0) {
      value_ = std::move(q.a);
    } else {
      value_ = std::move(q);
    }
  }
  Scalar(BigFloat f) : value_(std::move(f)) {}  // NOLINT(google-explicit-constructor)

  ScalarKind kind() const {
    if (std::holds_alternative<Rational>(value_)) return ScalarKind::rational;
    if (std::holds_alternative<QuadExt>(value_)) return ScalarKind::quadext;
    return ScalarKind::bigfloat;
  }

  bool is_rational() const { return kind() == ScalarKind::rational; }
  bool is_quadext() const { return kind() == ScalarKind::quadext; }
  bool is_bigfloat() const { return kind() == ScalarKind::bigfloat; }

  const Rational& as_rational() const {
    if (!is_rational()) throw kind_error("scalar is not rational");
    return std::get<Rational>(value_);
  }

  const QuadExt& as_quadext() const {
    if (!is_quadext()) throw kind_error("scalar is not a quadratic extension");
    return std::get<QuadExt>(value_);
  }

  const BigFloat& as_bigfloat() const {
    if (!is_bigfloat()) throw kind_error("scalar is not a float");
    return std::get<BigFloat>(value_);
  }

  friend Scalar operator+(const Scalar& x, const Scalar& y) {
    return combine(x, y, Op::add);
  }
  friend Scalar operator-(const Scalar& x, const Scalar& y) {
    return combine(x, y, Op::sub);
  }
  friend Scalar operator*(const Scalar& x, const Scalar& y) {
    return combine(x, y, Op::mul);
  }
  friend Scalar operator/(const Scalar& x, const Scalar& y) {
    return combine(x, y, Op::div);
  }

  Scalar operator-() const {
    switch (kind()) {
      case ScalarKind::rational: return Scalar(Rational(-as_rational()));
      case ScalarKind::quadext: return Scalar(-as_quadext());
      case ScalarKind::bigfloat: return Scalar(-as_bigfloat());
    }
    throw kind_error("unreachable");
  }

  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  // Three-way comparison.  Exact in every supported pairing (rational vs
  // float compares through the exact integer routine); pairing a quadratic
  // extension with a float, or two extensions over different radicands, is a
  // kind error.
  friend int compare(const Scalar& x, const Scalar& y) {
    if (x.is_rational() && y.is_rational())
      return x.as_rational().compare(y.as_rational());
    if (x.is_rational() && y.is_quadext()) return compare(x.as_rational(), y.as_quadext());
    if (x.is_quadext() && y.is_rational()) return compare(x.as_quadext(), y.as_rational());
    if (x.is_quadext() && y.is_quadext()) return compare(x.as_quadext(), y.as_quadext());
    if (x.is_rational() && y.is_bigfloat()) return compare(x.as_rational(), y.as_bigfloat());
    if (x.is_bigfloat() && y.is_rational()) return compare(x.as_bigfloat(), y.as_rational());
    if (x.is_bigfloat() && y.is_bigfloat()) return compare(x.as_bigfloat(), y.as_bigfloat());
    throw kind_error(
        "comparing a quadratic extension with a float requires an explicit "
        "to_bigfloat conversion");
  }

  friend bool operator<(const Scalar& x, const Scalar& y) { return compare(x, y) < 0; }
  friend bool operator>(const Scalar& x, const Scalar& y) { return compare(x, y) > 0; }
  friend bool operator<=(const Scalar& x, const Scalar& y) { return compare(x, y) <= 0; }
  friend bool operator>=(const Scalar& x, const Scalar& y) { return compare(x, y) >= 0; }
  friend bool operator==(const Scalar& x, const Scalar& y) { return compare(x, y) == 0; }
  friend bool operator!=(const Scalar& x, const Scalar& y) { return compare(x, y) != 0; }

 private:
  enum class Op { add, sub, mul, div };

  static Rational apply(const Rational& a, const Rational& b, Op op) {
    switch (op) {
      case Op::add: return a + b;
      case Op::sub: return a - b;
      case Op::mul: return a * b;
      case Op::div:
        if (b == 0) throw usage_error("division by zero");
        return a / b;
    }
    throw kind_error("unreachable");
  }

  static QuadExt apply(const QuadExt& a, const QuadExt& b, Op op) {
    switch (op) {
      case Op::add: return a + b;
      case Op::sub: return a - b;
      case Op::mul: return a * b;
      case Op::div: return a / b;
    }
    throw kind_error("unreachable");
  }

  static BigFloat apply(const BigFloat& a, const BigFloat& b, Op op) {
    switch (op) {
      case Op::add: return a + b;
      case Op::sub: return a - b;
      case Op::mul: return a * b;
      case Op::div: return a / b;
    }
    throw kind_error("unreachable");
  }

  static QuadExt widen(const Rational& r, const Int& d) { return {r, Rational(0), d}; }

  static Scalar combine(const Scalar& x, const Scalar& y, Op op) {
    if (x.is_rational() && y.is_rational())
      return Scalar(apply(x.as_rational(), y.as_rational(), op));
    if (x.is_rational() && y.is_quadext())
      return Scalar(apply(widen(x.as_rational(), y.as_quadext().d), y.as_quadext(), op));
    if (x.is_quadext() && y.is_rational())
      return Scalar(apply(x.as_quadext(), widen(y.as_rational(), x.as_quadext().d), op));
    if (x.is_quadext() && y.is_quadext())
      return Scalar(apply(x.as_quadext(), y.as_quadext(), op));
    if (x.is_rational() && y.is_bigfloat())
      return Scalar(apply(BigFloat(x.as_rational(), y.as_bigfloat().precision()),
                          y.as_bigfloat(), op));
    if (x.is_bigfloat() && y.is_rational())
      return Scalar(apply(x.as_bigfloat(),
                          BigFloat(y.as_rational(), x.as_bigfloat().precision()), op));
    if (x.is_bigfloat() && y.is_bigfloat())
      return Scalar(apply(x.as_bigfloat(), y.as_bigfloat(), op));
    throw kind_error(
        "combining a quadratic extension with a float requires an explicit "
        "to_bigfloat conversion");
  }

  std::variant<Rational, QuadExt, BigFloat> value_;
};

inline int sign(const Scalar& x) {
  switch (x.kind()) {
    case ScalarKind::rational: return sign(x.as_rational());
    case ScalarKind::quadext: return sign(x.as_quadext());
    case ScalarKind::bigfloat: return x.as_bigfloat().sign();
  }
  throw kind_error("unreachable");
}

inline bool is_zero(const Scalar& x) { return sign(x) == 0; }

// Explicit conversion to floating point — the one sanctioned way to leave
// exact arithmetic.
inline BigFloat to_bigfloat(const Scalar& x, mpfr_prec_t prec = 0) {
  switch (x.kind()) {
    case ScalarKind::rational:
      return BigFloat(x.as_rational(), prec);
    case ScalarKind::quadext:
      return to_bigfloat(x.as_quadext(), prec);
    case ScalarKind::bigfloat: {
      if (prec <= 0 || prec == x.as_bigfloat().precision()) return x.as_bigfloat();
      BigFloat out(Precision{prec});
      mpfr_set(out.raw(), x.as_bigfloat().raw(), MPFR_RNDN);
      return out;
    }
  }
  throw kind_error("unreachable");
}

// Equality up to the configured float tolerance when either side is a float;
// exact equality otherwise.
inline bool equal_within_tolerance(const Scalar& x, const Scalar& y) {
  if (x.is_bigfloat() || y.is_bigfloat()) {
    const BigFloat diff = to_bigfloat(x) - to_bigfloat(y);
    return approx_zero(diff);
  }
  return compare(x, y) == 0;
}

// Both roots of a x^2 + b x + c = 0 over the reals, kept exact: the
// discriminant is split into square and squarefree parts, so each root is a
// rational or an element of a quadratic extension.  The first component is
// the "-" branch (-b - sqrt(disc))/(2a), the second the "+" branch.
inline std::pair<Scalar, Scalar> quad_solve(const Int& a, const Int& b, const Int& c) {
  if (a == 0) throw usage_error("leading coefficient must be nonzero");
  const Int disc = b * b - 4 * a * c;
  if (disc < 0) throw usage_error("negative discriminant: no real roots");
  const SquarefreeParts parts = squarefree_decompose(disc);
  const Rational denom = Rational(2 * a);
  const Rational base = Rational(-b) / denom;
  const Rational spread = Rational(parts.square_root) / denom;
  if (parts.radical == 1) {
    return {Scalar(base - spread), Scalar(base + spread)};
  }
  return {Scalar(QuadExt{base, -spread, parts.radical}),
          Scalar(QuadExt{base, spread, parts.radical})};
}

inline std::string describe(const Scalar& x) {
  switch (x.kind()) {
    case ScalarKind::rational: return format_rational(x.as_rational());
    case ScalarKind::quadext: return format_quadext(x.as_quadext());
    case ScalarKind::bigfloat: return x.as_bigfloat().to_string();
  }
  throw kind_error("unreachable");
}

}  // namespace deplab
