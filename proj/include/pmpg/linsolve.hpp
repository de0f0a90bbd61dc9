#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pmpg/errors.hpp"
#include "pmpg/ratfunc.hpp"

namespace pmpg {

template <typename F>
struct FieldTraits {
  static bool is_zero(const F& x) { return x == F(0); }
  static std::size_t pivot_weight(const F&) { return 0; }
};

// Over the function field, prefer structurally small pivots to keep
// intermediate degrees down.
template <>
struct FieldTraits<RationalFunction> {
  static bool is_zero(const RationalFunction& x) { return x.is_zero(); }
  static std::size_t pivot_weight(const RationalFunction& x) {
    return static_cast<std::size_t>(x.num().degree() + x.den().degree());
  }
};

// Exact Gaussian elimination over the field F (Rational or RationalFunction).
// Pivot: nonzero candidate of least pivot_weight, ties by row order. The
// returned x is re-verified against the original system; a mismatch would be
// an arithmetic bug and throws InvariantViolation.
template <typename F>
std::vector<F> solve_linear(const std::vector<std::vector<F>>& A_in, const std::vector<F>& b_in) {
  using T = FieldTraits<F>;
  const std::size_t n = A_in.size();
  if (b_in.size() != n) throw std::invalid_argument("solve_linear: size mismatch");
  for (const auto& row : A_in)
    if (row.size() != n) throw std::invalid_argument("solve_linear: matrix not square");

  std::vector<std::vector<F>> a = A_in;
  std::vector<F> b = b_in;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = n;
    std::size_t best = 0;
    for (std::size_t r = k; r < n; ++r) {
      if (T::is_zero(a[r][k])) continue;
      std::size_t w = T::pivot_weight(a[r][k]);
      if (pivot == n || w < best) {
        pivot = r;
        best = w;
      }
    }
    if (pivot == n) throw SingularMatrixError(k);
    std::swap(a[k], a[pivot]);
    std::swap(b[k], b[pivot]);
    for (std::size_t r = k + 1; r < n; ++r) {
      if (T::is_zero(a[r][k])) continue;
      F factor = a[r][k] / a[k][k];
      for (std::size_t c = k; c < n; ++c) a[r][c] = a[r][c] - factor * a[k][c];
      b[r] = b[r] - factor * b[k];
    }
  }

  std::vector<F> x(n, F(0));
  for (std::size_t k = n; k-- > 0;) {
    F acc = b[k];
    for (std::size_t c = k + 1; c < n; ++c) acc = acc - a[k][c] * x[c];
    x[k] = acc / a[k][k];
  }

  for (std::size_t r = 0; r < n; ++r) {
    F acc = F(0);
    for (std::size_t c = 0; c < n; ++c) acc = acc + A_in[r][c] * x[c];
    if (!T::is_zero(acc - b_in[r]))
      throw InvariantViolation("solve_linear: residual check failed");
  }
  return x;
}

}  // namespace pmpg
