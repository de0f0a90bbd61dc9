#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pmpg/rational.hpp"

namespace pmpg {

// Univariate polynomial over Rational in the variable t. Coefficient i is the
// coefficient of t^i; trailing zeros are stripped, so the empty coefficient
// list is the zero polynomial.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(const Rational& constant);  // NOLINT: implicit constant lift
  Polynomial(long constant) : Polynomial(Rational(constant)) {}
  explicit Polynomial(std::vector<Rational> coefficients);

  static Polynomial variable();  // t

  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }

  Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
  Rational leading() const;
  const std::vector<Rational>& coefficients() const { return c_; }

  Rational eval(const Rational& t) const;
  double eval(double t) const;

  Polynomial derivative() const;
  Polynomial pow(unsigned k) const;
  Polynomial monic() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator-() const;
  Polynomial operator*(const Rational& s) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  // Plain text, descending powers, e.g. "-t^2 + t + 1". Zero prints "0".
  std::string str() const;

 private:
  void strip();
  std::vector<Rational> c_;
};

// Euclidean division over the rational field: a = q*b + r with deg r < deg b.
// Throws std::domain_error when b is zero.
std::pair<Polynomial, Polynomial> divrem(const Polynomial& a, const Polynomial& b);

// Monic gcd via the primitive Euclidean algorithm over the integers
// (contents removed at every step to keep coefficients small).
Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

struct ZeroOrderAtOne {
  unsigned multiplicity;    // largest m with (1-t)^m dividing p
  Rational deflated_value;  // (p / (1-t)^m)(1), never zero
};

// Throws std::domain_error on the zero polynomial.
ZeroOrderAtOne zero_order_at_one(const Polynomial& p);

}  // namespace pmpg
