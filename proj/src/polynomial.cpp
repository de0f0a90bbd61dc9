#include "pmpg/polynomial.hpp"

#include <sstream>
#include <stdexcept>

namespace pmpg {

Polynomial::Polynomial(const Rational& constant) {
  if (!constant.is_zero()) c_.push_back(constant);
}

Polynomial::Polynomial(std::vector<Rational> coefficients) : c_(std::move(coefficients)) {
  strip();
}

Polynomial Polynomial::variable() {
  return Polynomial(std::vector<Rational>{Rational(0), Rational(1)});
}

void Polynomial::strip() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Rational Polynomial::leading() const {
  if (is_zero()) throw std::domain_error("leading coefficient of zero polynomial");
  return c_.back();
}

Rational Polynomial::eval(const Rational& t) const {
  Rational acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double Polynomial::eval(double t) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + it->to_double();
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial();
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Rational(static_cast<long>(i));
  return Polynomial(std::move(d));
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial result{Rational(1)};
  Polynomial base = *this;
  while (k > 0) {
    if (k & 1u) result = result * base;
    base = base * base;
    k >>= 1u;
  }
  return result;
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  return *this * (Rational(1) / leading());
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-() const {
  std::vector<Rational> c(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) c[i] = -c_[i];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(const Rational& s) const {
  if (s.is_zero()) return Polynomial();
  std::vector<Rational> c(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) c[i] = c_[i] * s;
  return Polynomial(std::move(c));
}

std::pair<Polynomial, Polynomial> divrem(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.degree() < b.degree()) return {Polynomial(), a};
  std::vector<Rational> rem(a.coefficients());
  std::vector<Rational> quot(a.degree() - b.degree() + 1, Rational(0));
  const Rational lead = b.leading();
  for (int k = a.degree() - b.degree(); k >= 0; --k) {
    Rational q = rem[k + b.degree()] / lead;
    quot[k] = q;
    if (q.is_zero()) continue;
    for (int j = 0; j <= b.degree(); ++j) rem[k + j] -= q * b.coeff(j);
  }
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

namespace {

// Integer-coefficient image of p scaled by a positive rational, made
// primitive with positive leading coefficient.
std::vector<Integer> integer_primitive(const Polynomial& p) {
  Integer lcm_den(1);
  for (const Rational& c : p.coefficients())
    mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.denominator().get_mpz_t());
  std::vector<Integer> z(p.coefficients().size());
  Integer content(0);
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = p.coefficients()[i].numerator() * (lcm_den / p.coefficients()[i].denominator());
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), z[i].get_mpz_t());
  }
  if (sgn(content) == 0) return z;
  if (sgn(z.back()) < 0) content = -content;
  for (auto& c : z) c /= content;
  return z;
}

void strip_z(std::vector<Integer>& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

// Pseudo-remainder: repeats a := lc(b)*a - lc(a)*t^(deg a - deg b)*b until
// deg a < deg b. The result is a constant multiple of the true remainder,
// which is all the primitive PRS needs.
std::vector<Integer> pseudo_rem(std::vector<Integer> a, const std::vector<Integer>& b) {
  const Integer lead = b.back();
  const int db = static_cast<int>(b.size()) - 1;
  while (!a.empty() && static_cast<int>(a.size()) - 1 >= db) {
    Integer q = a.back();
    for (auto& c : a) c *= lead;
    const int shift = static_cast<int>(a.size()) - 1 - db;
    for (int j = 0; j <= db; ++j) a[shift + j] -= q * b[j];
    strip_z(a);
  }
  return a;
}

void make_primitive_z(std::vector<Integer>& p) {
  Integer content(0);
  for (const auto& c : p) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
  if (sgn(content) == 0) return;
  if (sgn(p.back()) < 0) content = -content;
  for (auto& c : p) c /= content;
}

}  // namespace

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  std::vector<Integer> r0 = integer_primitive(a);
  std::vector<Integer> r1 = integer_primitive(b);
  if (r0.size() < r1.size()) std::swap(r0, r1);
  while (!r1.empty()) {
    std::vector<Integer> r2 = pseudo_rem(r0, r1);
    make_primitive_z(r2);
    r0 = std::move(r1);
    r1 = std::move(r2);
  }
  std::vector<Rational> c(r0.size());
  for (std::size_t i = 0; i < r0.size(); ++i) c[i] = Rational(r0[i]);
  return Polynomial(std::move(c)).monic();
}

ZeroOrderAtOne zero_order_at_one(const Polynomial& p) {
  if (p.is_zero()) throw std::domain_error("zero polynomial has no order at t=1");
  // 1 - t
  const Polynomial one_minus_t(std::vector<Rational>{Rational(1), Rational(-1)});
  Polynomial q = p;
  unsigned m = 0;
  while (q.eval(Rational(1)).is_zero()) {
    auto [quot, rem] = divrem(q, one_minus_t);
    if (!rem.is_zero()) throw std::logic_error("deflation at t=1 left a remainder");
    q = std::move(quot);
    ++m;
  }
  return {m, q.eval(Rational(1))};
}

std::string Polynomial::str() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    Rational c = coeff(static_cast<std::size_t>(i));
    if (c.is_zero()) continue;
    if (first) {
      if (c.sign() < 0) out << "-";
      first = false;
    } else {
      out << (c.sign() < 0 ? " - " : " + ");
    }
    Rational a = c.abs();
    if (i == 0) {
      out << a.str();
    } else {
      if (a != Rational(1)) out << a.str() << "*";
      out << (i == 1 ? "t" : "t^" + std::to_string(i));
    }
  }
  return out.str();
}

}  // namespace pmpg
