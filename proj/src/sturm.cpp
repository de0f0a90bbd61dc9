#include "pmpg/sturm.hpp"

#include <stdexcept>
#include <vector>

namespace pmpg {

namespace {

// Positive-scale normalization: divides by the (positive) content so the
// chain's signs are preserved while coefficients stay small.
Polynomial primitive_same_sign(const Polynomial& p) {
  if (p.is_zero()) return p;
  Integer lcm_den(1);
  for (const Rational& c : p.coefficients())
    mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.denominator().get_mpz_t());
  Integer content(0);
  for (const Rational& c : p.coefficients()) {
    Integer z = c.numerator() * (lcm_den / c.denominator());
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), z.get_mpz_t());
  }
  return p * Rational(lcm_den, content);
}

int sign_changes(const std::vector<Polynomial>& chain, const Rational& x) {
  int changes = 0;
  int prev = 0;
  for (const Polynomial& p : chain) {
    int s = p.eval(x).sign();
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

}  // namespace

int count_roots_in(const Polynomial& p, const Rational& a, const Rational& b) {
  if (p.is_zero()) throw std::domain_error("root counting on the zero polynomial");
  if (!(a < b)) throw std::invalid_argument("root counting needs a < b");

  Polynomial q = p;
  Polynomial g = poly_gcd(q, q.derivative());
  if (g.degree() > 0) q = divrem(q, g).first;  // squarefree part, same roots

  const bool root_at_a = q.eval(a).is_zero();
  auto deflate_at = [&q](const Rational& x) {
    const Polynomial lin(std::vector<Rational>{-x, Rational(1)});  // t - x
    while (q.eval(x).is_zero()) q = divrem(q, lin).first;
  };
  deflate_at(a);
  deflate_at(b);

  int open_count = 0;
  if (q.degree() > 0) {
    std::vector<Polynomial> chain;
    chain.push_back(primitive_same_sign(q));
    chain.push_back(primitive_same_sign(q.derivative()));
    while (chain.back().degree() > 0) {
      Polynomial rem = divrem(chain[chain.size() - 2], chain.back()).second;
      if (rem.is_zero()) break;
      chain.push_back(primitive_same_sign(-rem));
    }
    open_count = sign_changes(chain, a) - sign_changes(chain, b);
  }
  return open_count + (root_at_a ? 1 : 0);
}

}  // namespace pmpg
