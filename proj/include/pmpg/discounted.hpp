#pragma once

#include <map>
#include <string>
#include <vector>

#include "pmpg/arena.hpp"
#include "pmpg/linsolve.hpp"

namespace pmpg {

// Per-state discount factors, each in [0, 1).
struct DiscountMap {
  std::map<std::string, Rational> lambda;

  static DiscountMap constant(const Arena& arena, const Rational& value);
};

void validate_discounts(const Arena& arena, const DiscountMap& discounts);
std::vector<Rational> discounts_by_index(const Arena& arena, const DiscountMap& discounts);

// Partial sum of the per-state-discounted payoff over a finite play prefix:
// sum_i lambda(s_0)...lambda(s_{i-1}) (1 - lambda(s_i)) r(s_i), exact.
Rational discounted_payoff_of_play(const Arena& arena, const Play& prefix,
                                   const DiscountMap& discounts);

// Expected discounted payoff of a fixed profile from every state, by exact
// solve of (I - M) x = v with M[s',s''] = lambda(s') p(s'->s'') and
// v[s] = (1 - lambda(s)) r(s). F is Rational (constant discounts) or
// RationalFunction (parametrized discounts).
template <typename F>
std::vector<F> eval_profile_discounted_generic(const Arena& arena,
                                               const std::vector<F>& lambda_by_state,
                                               const StrategyProfile& profile) {
  const std::size_t n = arena.size();
  if (lambda_by_state.size() != n)
    throw std::invalid_argument("one discount factor per state required");
  const auto chain = induced_chain(arena, profile);
  std::vector<std::vector<F>> system(n, std::vector<F>(n, F(0)));
  std::vector<F> v(n, F(0));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      F m = lambda_by_state[r] * F(chain[r][c]);
      system[r][c] = (r == c ? F(1) - m : -m);
    }
    v[r] = (F(1) - lambda_by_state[r]) * F(arena.state(r).reward);
  }
  return solve_linear(system, v);
}

std::vector<Rational> eval_profile_discounted(const Arena& arena, const DiscountMap& discounts,
                                              const StrategyProfile& profile);

struct DiscountedSolveResult {
  std::map<std::string, double> values;
  StrategyProfile profile;  // greedy for the final iterate, lexicographic ties
  double residual = 0.0;    // final sup-norm iteration gap
  std::size_t iterations = 0;
};

// One application of the Shapley operator
//   F(x)[s] = opt_a (1-lambda(s)) r(s) + lambda(s) sum_s' p(s,a,s') x[s'].
std::vector<double> apply_shapley_operator(const Arena& arena,
                                           const std::vector<double>& lambda,
                                           const std::vector<double>& x);

// Value iteration. Stops when the iteration gap guarantees a true error of at
// most `tolerance`; throws ConvergenceError (with the last iterate) when
// max_iter is hit first.
DiscountedSolveResult solve_discounted(const Arena& arena, const DiscountMap& discounts,
                                       double tolerance, std::size_t max_iter);

// Stopping-game arena: one fresh absorbing state s* per original state s,
// carrying reward r(s); executing a in s moves as before with probability
// scaled by lambda(s) and to s* with probability 1 - lambda(s). Weights and
// priorities are all set to 1, so the plain mean payoff on the result equals
// the discounted payoff on the input.
Arena star_transform(const Arena& arena, const DiscountMap& discounts);

}  // namespace pmpg
