#pragma once

#include "pmpg/polynomial.hpp"

namespace pmpg {

// Number of distinct real roots of p in the half-open interval [a, b).
// Exact (Sturm chain of the squarefree part). Requires p nonzero and a < b.
int count_roots_in(const Polynomial& p, const Rational& a, const Rational& b);

}  // namespace pmpg
