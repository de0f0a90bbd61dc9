#include "pmpg/ratfunc.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace pmpg {

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  if (num_.is_zero()) {
    den_ = Polynomial(Rational(1));
    return;
  }
  Polynomial g = poly_gcd(num_, den_);
  if (g.degree() > 0) {
    num_ = divrem(num_, g).first;
    den_ = divrem(den_, g).first;
  }
  Rational lead = den_.leading();
  if (lead != Rational(1)) {
    Rational inv = Rational(1) / lead;
    num_ = num_ * inv;
    den_ = den_ * inv;
  }
}

RationalFunction RationalFunction::variable() {
  return RationalFunction(Polynomial::variable(), Polynomial(Rational(1)));
}

Rational RationalFunction::constant_value() const {
  if (!is_constant()) throw std::domain_error("rational function is not constant");
  return num_.coeff(0) / den_.coeff(0);
}

Rational RationalFunction::eval_at(const Rational& t) const {
  Rational d = den_.eval(t);
  if (d.is_zero()) throw std::domain_error("pole at t = " + t.str());
  return num_.eval(t) / d;
}

double RationalFunction::eval_at(double t) const { return num_.eval(t) / den_.eval(t); }

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) throw std::domain_error("division by the zero rational function");
  return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction RationalFunction::pow(unsigned k) const {
  RationalFunction result(1);
  RationalFunction base = *this;
  while (k > 0) {
    if (k & 1u) result = result * base;
    base = base * base;
    k >>= 1u;
  }
  return result;
}

SignAtOneMinus sign_near_one(const RationalFunction& f) {
  if (f.is_zero()) return {0, 0};
  ZeroOrderAtOne n = zero_order_at_one(f.num());
  ZeroOrderAtOne d = zero_order_at_one(f.den());
  Rational h1 = n.deflated_value / d.deflated_value;
  return {h1.sign(), static_cast<int>(n.multiplicity) - static_cast<int>(d.multiplicity)};
}

int compare_near_one(const RationalFunction& f, const RationalFunction& g) {
  return sign_near_one(f - g).sign;
}

std::string RationalFunction::str() const {
  if (is_constant()) return constant_value().str();
  // Joint scale making both parts integer and primitive.
  Integer lcm_den(1);
  Integer gcd_num(0);
  auto scan = [&](const Polynomial& p) {
    for (const Rational& c : p.coefficients())
      mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.denominator().get_mpz_t());
  };
  scan(num_);
  scan(den_);
  auto scan2 = [&](const Polynomial& p) {
    for (const Rational& c : p.coefficients()) {
      Integer z = c.numerator() * (lcm_den / c.denominator());
      mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), z.get_mpz_t());
    }
  };
  scan2(num_);
  scan2(den_);
  Rational scale(lcm_den, gcd_num);  // gcd_num > 0: num_ is nonzero here
  if (sign_near_one(RationalFunction(den_, Polynomial(Rational(1)))).sign < 0) scale = -scale;
  Polynomial n = num_ * scale;
  Polynomial d = den_ * scale;
  if (d == Polynomial(Rational(1))) return n.str();
  return "(" + n.str() + ")/(" + d.str() + ")";
}

namespace {

// Recursive-descent parser for the textual rational-function format.
class ExprParser {
 public:
  explicit ExprParser(const std::string& text) : s_(text) {}

  RationalFunction parse() {
    RationalFunction r = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return r;
  }

 private:
  static constexpr unsigned kMaxExponent = 4096;

  RationalFunction expr() {
    RationalFunction acc = term();
    for (;;) {
      skip_ws();
      if (match('+')) acc = acc + term();
      else if (match('-')) acc = acc - term();
      else return acc;
    }
  }

  RationalFunction term() {
    RationalFunction acc = factor();
    for (;;) {
      skip_ws();
      if (match('*')) {
        acc = acc * factor();
      } else if (match('/')) {
        std::size_t at = pos_;
        RationalFunction d = factor();
        if (d.is_zero()) fail("division by zero", at);
        acc = acc / d;
      } else {
        return acc;
      }
    }
  }

  RationalFunction factor() {
    skip_ws();
    if (match('-')) return -factor();
    if (match('+')) return factor();
    RationalFunction base = primary();
    skip_ws();
    if (match('^')) {
      skip_ws();
      std::size_t at = pos_;
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
        fail("exponent must be a nonnegative integer", at);
      unsigned long e = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        e = e * 10 + static_cast<unsigned long>(s_[pos_] - '0');
        if (e > kMaxExponent) fail("exponent too large", at);
        ++pos_;
      }
      return base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  RationalFunction primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      RationalFunction r = expr();
      skip_ws();
      if (!match(')')) fail("expected ')'");
      return r;
    }
    if (c == 't') {
      ++pos_;
      return RationalFunction::variable();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return RationalFunction(Rational(Integer(s_.substr(start, pos_ - start))));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  bool match(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) { fail(msg, pos_); }
  [[noreturn]] void fail(const std::string& msg, std::size_t at) {
    throw std::invalid_argument("expression \"" + s_ + "\": " + msg + " at position " +
                                std::to_string(at));
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

RationalFunction parse_rational_function(const std::string& text) {
  return ExprParser(text).parse();
}

}  // namespace pmpg
