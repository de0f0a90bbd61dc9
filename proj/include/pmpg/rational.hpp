#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace pmpg {

using Integer = mpz_class;

// Exact rational scalar: always reduced, denominator > 0. All probabilities,
// rewards and weights in the library are carried by this type; floating point
// appears only in the numeric solver and the simulator.
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(long n) : q_(n) {}  // NOLINT: implicit from integer literals
  explicit Rational(const Integer& n) : q_(n) {}
  Rational(const Integer& num, const Integer& den) {
    if (sgn(den) == 0) throw std::domain_error("division by zero in rational");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }
  Rational(long num, long den) : Rational(Integer(num), Integer(den)) {}

  // Accepts "p/q" or "n" with an optional leading sign on p.
  static Rational parse(const std::string& text);

  Integer numerator() const { return q_.get_num(); }
  Integer denominator() const { return q_.get_den(); }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return q_.get_den() == 1; }

  Rational abs() const { return Rational(mpq_class(::abs(q_))); }
  Rational pow(unsigned k) const;

  double to_double() const { return q_.get_d(); }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.q_ + b.q_));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.q_ - b.q_));
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.q_ * b.q_));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("division by zero in rational");
    return Rational(mpq_class(a.q_ / b.q_));
  }
  Rational operator-() const { return Rational(mpq_class(-q_)); }

  Rational& operator+=(const Rational& b) { q_ += b.q_; return *this; }
  Rational& operator-=(const Rational& b) { q_ -= b.q_; return *this; }
  Rational& operator*=(const Rational& b) { q_ *= b.q_; return *this; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) != 0; }
  friend bool operator<(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) >= 0; }

 private:
  explicit Rational(mpq_class q) : q_(std::move(q)) {}
  mpq_class q_;
};

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace pmpg
