#pragma once

#include <string>
#include <utility>

#include "pmpg/polynomial.hpp"

namespace pmpg {

// Ratio of two polynomials over Rational, kept reduced (gcd(num, den) = 1)
// with a monic denominator. This is the carrier for state-dependent discount
// factors as functions of t and for the value functions they induce.
class RationalFunction {
 public:
  RationalFunction() : num_(), den_(Rational(1)) {}
  RationalFunction(const Rational& constant) : num_(constant), den_(Rational(1)) {}  // NOLINT
  RationalFunction(long constant) : RationalFunction(Rational(constant)) {}          // NOLINT
  RationalFunction(Polynomial num, Polynomial den);

  static RationalFunction variable();  // t

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  Rational constant_value() const;

  bool has_pole_at(const Rational& t) const { return den_.eval(t).is_zero(); }
  // Throws std::domain_error at a pole.
  Rational eval_at(const Rational& t) const;
  double eval_at(double t) const;

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  RationalFunction operator-() const;
  RationalFunction pow(unsigned k) const;

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) {
    return !(a == b);
  }

  // Reduced "P(t)/Q(t)" with jointly primitive integer coefficients and the
  // denominator normalized positive in a left neighborhood of 1. Constants
  // print as plain rationals, polynomial values without the "/(1)".
  std::string str() const;

 private:
  Polynomial num_, den_;
};

// Sign a nonzero rational function takes on some interval (1-eps, 1),
// together with the order of its zero (negative: pole) at t = 1.
struct SignAtOneMinus {
  int sign;             // -1, 0, +1; 0 iff the function is identically zero
  int vanishing_order;  // meaningful only when sign != 0
};

// Writes f(t) = (1-t)^k * h(t) with h(1) defined and nonzero; returns
// sign(h(1)) and k. The returned sign equals sign(f(t)) for all t in some
// left neighborhood of 1.
SignAtOneMinus sign_near_one(const RationalFunction& f);

// Order of f(t) vs g(t) valid on some (1-eps, 1): -1, 0, +1.
int compare_near_one(const RationalFunction& f, const RationalFunction& g);

// Parses an integer-coefficient arithmetic expression over t with operators
// + - * / ^ ( ), e.g. "1-(1-t)^2". Throws std::invalid_argument with the
// offending position on malformed input or division by the zero function.
RationalFunction parse_rational_function(const std::string& text);

}  // namespace pmpg
