#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pmpg/errors.hpp"
#include "pmpg/ratfunc.hpp"

namespace pmpg {

enum class Controller { Max, Min };

struct SuccessorEntry {
  std::string state;
  int state_index = -1;  // resolved during validation
  Rational prob;
  friend bool operator==(const SuccessorEntry& a, const SuccessorEntry& b) {
    return a.state == b.state && a.prob == b.prob;
  }
};

struct ArenaAction {
  std::string label;
  std::vector<SuccessorEntry> to;
  friend bool operator==(const ArenaAction& a, const ArenaAction& b) {
    return a.label == b.label && a.to == b.to;
  }
};

struct ArenaState {
  std::string id;
  Controller controller = Controller::Max;
  Rational reward;
  std::optional<Rational> weight;
  std::optional<int> priority;
  std::optional<RationalFunction> discount;
  std::vector<ArenaAction> actions;
  friend bool operator==(const ArenaState& a, const ArenaState& b) {
    return a.id == b.id && a.controller == b.controller && a.reward == b.reward &&
           a.weight == b.weight && a.priority == b.priority && a.discount == b.discount &&
           a.actions == b.actions;
  }
};

// Validated game graph. State and action order is document order; all
// lexicographic tie-breaking in the solvers derives from it. Immutable after
// validation by convention: nothing in the library mutates a built arena.
struct Arena {
  std::vector<ArenaState> states;

  std::size_t size() const { return states.size(); }
  const ArenaState& state(std::size_t i) const { return states[i]; }
  // -1 when the id is unknown.
  int index_of(const std::string& id) const;

  friend bool operator==(const Arena& a, const Arena& b) { return a.states == b.states; }
};

struct WeightedPrioritySystem {
  std::map<std::string, Rational> weight;
  std::map<std::string, int> priority;
};

// One chosen action label per controlled state, for each player.
struct StrategyProfile {
  std::map<std::string, std::string> max_choice;
  std::map<std::string, std::string> min_choice;
  friend bool operator==(const StrategyProfile& a, const StrategyProfile& b) {
    return a.max_choice == b.max_choice && a.min_choice == b.min_choice;
  }
};

// Finite play, stored resolved: states[i] --actions[i]--> states[i+1].
struct Play {
  std::vector<int> states;
  std::vector<int> actions;
};

// Builds an Arena from a parsed document, checking every structural
// invariant. Throws ValidationError naming the violated invariant and the
// offending location.
Arena validate_arena(const nlohmann::json& doc);
Arena parse_arena(const std::string& text);
Arena load_arena_file(const std::string& path);
nlohmann::json serialize_arena(const Arena& arena);

// Requires weight and priority on every state.
WeightedPrioritySystem weighted_priority_system(const Arena& arena);
void validate_system(const Arena& arena, const WeightedPrioritySystem& system);

void validate_profile(const Arena& arena, const StrategyProfile& profile);
// Per-state chosen action index (every state, both players).
std::vector<int> profile_choices(const Arena& arena, const StrategyProfile& profile);
StrategyProfile profile_from_choices(const Arena& arena, const std::vector<int>& choices);

// Checks actions exist and every step has positive probability.
void validate_play(const Arena& arena, const Play& play);

// Deterministic memoryless profiles in lexicographic order of
// (state order, action order), index-addressable so enumeration can be
// chunked. The same space split per player gives the Max/Min factors.
class ProfileSpace {
 public:
  explicit ProfileSpace(const Arena& arena);

  Integer total() const { return total_; }
  // Throws BudgetError when the profile count exceeds `budget`.
  std::size_t total_checked(std::size_t budget) const;

  std::size_t max_count() const { return max_count_; }
  std::size_t min_count() const { return min_count_; }

  StrategyProfile profile_at(std::size_t global_index) const;
  StrategyProfile combine(std::size_t max_index, std::size_t min_index) const;
  // Global lexicographic rank of the combined profile.
  std::size_t global_index(std::size_t max_index, std::size_t min_index) const;

 private:
  std::vector<int> choices_of(std::size_t max_index, std::size_t min_index) const;
  const Arena* arena_;
  Integer total_;
  std::size_t max_count_ = 1;
  std::size_t min_count_ = 1;
};

std::vector<StrategyProfile> enumerate_profiles(const Arena& arena,
                                                std::size_t budget = 1u << 20);

// Transition matrix of the Markov chain induced by a fixed profile; row s is
// the successor distribution of the chosen action, rows sum to exactly 1.
std::vector<std::vector<Rational>> induced_chain(const Arena& arena,
                                                 const StrategyProfile& profile);

}  // namespace pmpg
