#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pmpg/arena.hpp"

namespace pmpg {

// Structure of the Markov chain induced by a fixed profile, seen from one
// initial state: reachable support, bottom strongly-connected components,
// their stationary distributions and the absorption probabilities into them.
struct ChainAnalysis {
  int initial = 0;
  std::vector<int> reachable;                       // sorted state indices
  std::vector<std::vector<int>> recurrent_classes;  // each sorted
  std::vector<int> class_priority;                  // min priority per class
  std::vector<std::map<int, Rational>> stationary;  // per class, state -> mass
  std::vector<Rational> absorption;                 // per class, from initial
};

ChainAnalysis analyze_chain(const Arena& arena, const StrategyProfile& profile, int initial,
                            const WeightedPrioritySystem& system);

// Priority mean payoff of a finite prefix under an assumed play priority:
// sum 1_{pi=alpha} w r / sum 1_{pi=alpha} w over the prefix states. Returns
// nullopt (the indefinite 0/0) when no prefix state has priority alpha.
std::optional<Rational> pmp_payoff_of_play_prefix(const Arena& arena, const Play& prefix,
                                                  const WeightedPrioritySystem& system,
                                                  int assumed_priority);

// Exact expectation of the priority mean payoff for a fixed profile, from
// every state: absorption-weighted average of the per-class values
//   sum_{q in C, pi(q)=pi(C)} xi(q) w(q) r(q) / sum_{...} xi(q) w(q).
std::vector<Rational> eval_profile_pmp(const Arena& arena, const StrategyProfile& profile,
                                       const WeightedPrioritySystem& system);

struct PmpSolveResult {
  std::vector<Rational> values;  // by state index
  StrategyProfile profile;       // lexicographically first saddle point
  // Actions chosen at each controlled state by some optimal (saddle) profile.
  std::map<std::string, std::set<std::string>> optimal_max_choices;
  std::map<std::string, std::set<std::string>> optimal_min_choices;
  std::size_t saddle_count = 0;
};

// Maximin over the full profile enumeration, with the saddle property of the
// returned profile verified against every unilateral deviation. Throws
// BudgetError if the enumeration exceeds `budget` and InvariantViolation if
// no simultaneous saddle exists (impossible for these games).
PmpSolveResult solve_pmp_bruteforce(const Arena& arena, const WeightedPrioritySystem& system,
                                    std::size_t budget = 1u << 20);

// Parity games as the special case w = 1, r = [priority even].
struct ParityEncoding {
  std::map<std::string, Rational> rewards;
  WeightedPrioritySystem system;
};

ParityEncoding parity_encoding(const std::map<std::string, int>& priorities);
// Rewrites rewards/weights/priorities of `arena` per the encoding of its own
// priorities (which must be present on every state).
Arena apply_parity_encoding(const Arena& arena);

}  // namespace pmpg
