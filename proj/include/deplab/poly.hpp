#pragma once

#include <cstddef>
#include <vector>

#include "deplab/errors.hpp"
#include "deplab/exact.hpp"

namespace deplab {

// Univariate polynomial with exact rational coefficients, stored ascending
// by degree with no trailing zeros (so the zero polynomial is empty).
class Poly {
 public:
  Poly() = default;

  explicit Poly(std::vector<Rational> ascending) : coeffs_(std::move(ascending)) {
    trim();
  }

  static Poly constant(const Rational& c) { return Poly({c}); }

  // The monomial z.
  static Poly variable() { return Poly({Rational(0), Rational(1)}); }

  const std::vector<Rational>& coefficients() const { return coeffs_; }

  bool is_zero_poly() const { return coeffs_.empty(); }

  // Degree of the zero polynomial is reported as -1.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  Rational eval(const Rational& z) const {
    Rational acc(0);
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * z + coeffs_[i];
    return acc;
  }

  friend Poly operator+(const Poly& p, const Poly& q) {
    std::vector<Rational> out(std::max(p.coeffs_.size(), q.coeffs_.size()), Rational(0));
    for (std::size_t i = 0; i < p.coeffs_.size(); ++i) out[i] += p.coeffs_[i];
    for (std::size_t i = 0; i < q.coeffs_.size(); ++i) out[i] += q.coeffs_[i];
    return Poly(std::move(out));
  }

  friend Poly operator-(const Poly& p, const Poly& q) {
    std::vector<Rational> out(std::max(p.coeffs_.size(), q.coeffs_.size()), Rational(0));
    for (std::size_t i = 0; i < p.coeffs_.size(); ++i) out[i] += p.coeffs_[i];
    for (std::size_t i = 0; i < q.coeffs_.size(); ++i) out[i] -= q.coeffs_[i];
    return Poly(std::move(out));
  }

  friend Poly operator*(const Poly& p, const Poly& q) {
    if (p.is_zero_poly() || q.is_zero_poly()) return Poly();
    std::vector<Rational> out(p.coeffs_.size() + q.coeffs_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < p.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < q.coeffs_.size(); ++j)
        out[i + j] += p.coeffs_[i] * q.coeffs_[j];
    return Poly(std::move(out));
  }

  friend Poly operator*(const Rational& c, const Poly& p) {
    std::vector<Rational> out = p.coeffs_;
    for (auto& x : out) x *= c;
    return Poly(std::move(out));
  }

  friend Poly operator-(const Poly& p) { return Rational(-1) * p; }

  Poly pow(unsigned e) const {
    Poly acc = constant(Rational(1));
    Poly base = *this;
    while (e > 0) {
      if (e & 1u) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  friend bool operator==(const Poly& p, const Poly& q) { return p.coeffs_ == q.coeffs_; }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<Rational> coeffs_;
};

// Decides whether p is identically zero by exact evaluation at the
// degree_bound + 1 integer points 0, 1, ..., degree_bound; a nonzero
// polynomial of degree <= degree_bound cannot vanish at all of them.
// Precondition: deg(p) <= degree_bound.
inline bool poly_is_zero(const Poly& p, int degree_bound) {
  if (degree_bound < 0) throw usage_error("degree bound must be non-negative");
  if (p.degree() > degree_bound)
    throw usage_error("degree bound below the polynomial's actual degree");
  for (int z = 0; z <= degree_bound; ++z) {
    if (p.eval(Rational(z)) != 0) return false;
  }
  return true;
}

}  // namespace deplab
