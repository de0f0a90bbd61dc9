#include "pmpg/rational.hpp"

#include <cctype>

namespace pmpg {

namespace {

bool is_signed_integer(const std::string& s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

bool is_unsigned_integer(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational Rational::parse(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) {
    if (!is_signed_integer(text))
      throw std::invalid_argument("not a rational: \"" + text + "\"");
    return Rational(Integer(text));
  }
  std::string num = text.substr(0, slash);
  std::string den = text.substr(slash + 1);
  if (!is_signed_integer(num) || !is_unsigned_integer(den))
    throw std::invalid_argument("not a rational: \"" + text + "\"");
  Integer d(den);
  if (sgn(d) == 0)
    throw std::invalid_argument("zero denominator in rational: \"" + text + "\"");
  return Rational(Integer(num), d);
}

Rational Rational::pow(unsigned k) const {
  Rational result(1);
  Rational base = *this;
  while (k > 0) {
    if (k & 1u) result *= base;
    base *= base;
    k >>= 1u;
  }
  return result;
}

std::string Rational::str() const {
  if (is_integer()) return numerator().get_str();
  return numerator().get_str() + "/" + denominator().get_str();
}

}  // namespace pmpg
