#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pmpg/arena.hpp"
#include "pmpg/discounted.hpp"
#include "pmpg/priority_mp.hpp"

namespace pmpg {

// Per-state discount factors as rational functions of t, together with a
// certified epsilon: every lambda_t(s) lies in [0,1) for all t in
// [1-epsilon, 1), and tends to 1 as t goes to 1 from the left.
struct DiscountParametrization {
  std::map<std::string, RationalFunction> lambda;
  Rational epsilon;
  std::vector<std::string> certification_notes;  // e.g. epsilon auto-shrink events
};

// lambda_t(s) = 1 - w(s) (1-t)^pi(s); epsilon is the largest 2^-k (k <= 64)
// keeping every w(s) epsilon^pi(s) < 1.
DiscountParametrization canonical_parametrization(const WeightedPrioritySystem& system);

// Builds the parametrization from explicit per-state `discount` expressions
// when present (certifying an epsilon by Sturm root counting, halving on
// failure), else canonically from weights and priorities.
DiscountParametrization make_parametrization(const Arena& arena);

void validate_parametrization(const Arena& arena, const DiscountParametrization& param);
std::vector<RationalFunction> parametrization_by_index(const Arena& arena,
                                                       const DiscountParametrization& param);

// Constant discount factors lambda_{t0}; t0 must evaluate into [0,1).
DiscountMap evaluate_parametrization(const Arena& arena, const DiscountParametrization& param,
                                     const Rational& t0);

// Weighted priority system derived from the parametrization: per state,
// 1 - lambda_t(s) factorizes as g(t) (1-t)^m with g(1) > 0; the priority is m
// and the weight g(1).
WeightedPrioritySystem derive_system(const DiscountParametrization& param);

// Symbolic profile value: one rational function of t per state.
std::vector<RationalFunction> eval_profile_discounted_symbolic(
    const Arena& arena, const DiscountParametrization& param, const StrategyProfile& profile);

struct DeviationCheck {
  std::string state;
  std::string player;  // "max" or "min"
  StrategyProfile deviating_profile;
  int sign;  // sign near 1- of (optimal value - deviating value), from the
             // deviating player's perspective it must not be favorable
  int vanishing_order;
};

struct BlackwellResult {
  StrategyProfile profile;
  std::map<std::string, RationalFunction> value_functions;
  std::vector<DeviationCheck> certificate;
  // All choices appearing in some Blackwell-optimal profile (complete in
  // exact mode; hybrid certifies only the returned profile).
  std::map<std::string, std::set<std::string>> optimal_max_choices;
  std::map<std::string, std::set<std::string>> optimal_min_choices;
  std::string mode_used;  // "exact", "hybrid" or "hybrid-fallback-exact"
};

// Full enumeration: finds the lexicographically first profile whose value
// dominates every unilateral deterministic memoryless deviation in the
// near-1 order, at every state.
BlackwellResult blackwell_search_exact(const Arena& arena, const DiscountParametrization& param,
                                       std::size_t budget = 1u << 20);

// Numeric pre-search at t_k = 1 - 2^-k (clipped into [1-epsilon, 1)); once
// the greedy profile is stable for 3 consecutive k it is certified exactly
// against all unilateral deviations. Falls back to the exact search when
// certification or the numeric solver fails.
BlackwellResult blackwell_search_hybrid(const Arena& arena, const DiscountParametrization& param,
                                        int k_start = 4, int k_end = 40,
                                        std::size_t budget = 1u << 20);

struct LimitCheckState {
  std::string id;
  Rational pmp_value;            // game value of the priority mean-payoff game
  Rational blackwell_pmp_value;  // the Blackwell profile played in that game
  bool equal = false;            // the two coincide (Theorem transfer)
};

struct Lemma2Check {
  StrategyProfile profile;
  bool ok = false;  // per state, V_profile(t) - pmp value vanishes at 1-
};

struct NumericRow {
  int k;
  Rational t;             // 1 - 2^-k clipped into [1-epsilon, 1)
  double max_deviation;   // max_s |value_function_s(t) - pmp value_s|
};

struct LimitCheckReport {
  WeightedPrioritySystem system;
  BlackwellResult blackwell;
  PmpSolveResult pmp;
  std::vector<LimitCheckState> states;
  bool blackwell_profile_is_pmp_saddle = false;
  std::vector<Lemma2Check> lemma2;
  std::vector<NumericRow> numeric;
  bool all_equal = false;  // every transfer equality and Lemma-2 check holds
};

// Machine check of the limit theorem on one arena: the Blackwell profile's
// priority mean-payoff value must equal the brute-force game value exactly,
// profile-wise values must tend to their priority mean-payoff counterparts,
// and the value functions evaluated near 1 must approach the game value.
LimitCheckReport limit_check(const Arena& arena, const DiscountParametrization& param,
                             const std::optional<WeightedPrioritySystem>& system_override,
                             int kmax = 20, std::size_t budget = 1u << 20,
                             std::size_t lemma2_sample = 64);

}  // namespace pmpg
