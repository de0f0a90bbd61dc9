#include "pmpg/arena.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace pmpg {

namespace {

using nlohmann::json;

std::string at(const std::string& base, const std::string& key) { return base + "." + key; }
std::string idx(const std::string& base, const char* key, std::size_t i) {
  return base + (base.empty() ? "" : ".") + key + "[" + std::to_string(i) + "]";
}

Rational parse_rational_field(const json& v, const std::string& loc) {
  try {
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational(static_cast<long>(v.get<long long>()));
  } catch (const std::invalid_argument& e) {
    throw ValidationError(loc, e.what());
  }
  throw ValidationError(loc, "expected a rational as \"p/q\" or an integer");
}

const json& require_field(const json& obj, const char* key, const std::string& loc) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(loc, std::string("missing field \"") + key + "\"");
  return *it;
}

}  // namespace

int Arena::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i].id == id) return static_cast<int>(i);
  return -1;
}

Arena validate_arena(const json& doc) {
  if (!doc.is_object()) throw ValidationError("", "top level must be an object");
  const json& jstates = require_field(doc, "states", "");
  if (!jstates.is_array() || jstates.empty())
    throw ValidationError("states", "expected a non-empty array of states");

  Arena arena;
  std::set<std::string> seen_ids;
  for (std::size_t si = 0; si < jstates.size(); ++si) {
    const std::string sloc = idx("", "states", si);
    const json& js = jstates[si];
    if (!js.is_object()) throw ValidationError(sloc, "state must be an object");

    ArenaState st;
    st.id = require_field(js, "id", sloc).get<std::string>();
    if (st.id.empty()) throw ValidationError(at(sloc, "id"), "state id must be non-empty");
    if (!seen_ids.insert(st.id).second)
      throw ValidationError(at(sloc, "id"), "duplicate state id \"" + st.id + "\"");

    std::string ctrl = require_field(js, "controller", sloc).get<std::string>();
    if (ctrl == "max") st.controller = Controller::Max;
    else if (ctrl == "min") st.controller = Controller::Min;
    else throw ValidationError(at(sloc, "controller"), "expected \"max\" or \"min\"");

    st.reward = parse_rational_field(require_field(js, "reward", sloc), at(sloc, "reward"));

    if (js.contains("weight"))
      st.weight = parse_rational_field(js["weight"], at(sloc, "weight"));
    if (js.contains("priority")) {
      const json& jp = js["priority"];
      if (!jp.is_number_integer() || jp.get<long long>() < 1)
        throw ValidationError(at(sloc, "priority"), "priority must be an integer >= 1");
      st.priority = static_cast<int>(jp.get<long long>());
    }
    if (js.contains("discount")) {
      const json& jd = js["discount"];
      if (!jd.is_string())
        throw ValidationError(at(sloc, "discount"), "discount must be an expression string");
      try {
        st.discount = parse_rational_function(jd.get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw ValidationError(at(sloc, "discount"), e.what());
      }
    }

    const json& jactions = require_field(js, "actions", sloc);
    if (!jactions.is_array() || jactions.empty())
      throw ValidationError(at(sloc, "actions"), "every state needs at least one action");
    std::set<std::string> seen_labels;
    for (std::size_t ai = 0; ai < jactions.size(); ++ai) {
      const std::string aloc = idx(sloc, "actions", ai);
      const json& ja = jactions[ai];
      ArenaAction act;
      act.label = require_field(ja, "label", aloc).get<std::string>();
      if (!seen_labels.insert(act.label).second)
        throw ValidationError(at(aloc, "label"), "duplicate action label \"" + act.label + "\"");
      const json& jto = require_field(ja, "to", aloc);
      if (!jto.is_array() || jto.empty())
        throw ValidationError(at(aloc, "to"), "expected a non-empty successor list");
      for (std::size_t ti = 0; ti < jto.size(); ++ti) {
        const std::string tloc = idx(aloc, "to", ti);
        SuccessorEntry entry;
        entry.state = require_field(jto[ti], "state", tloc).get<std::string>();
        entry.prob = parse_rational_field(require_field(jto[ti], "prob", tloc), at(tloc, "prob"));
        if (entry.prob.sign() < 0)
          throw ValidationError(at(tloc, "prob"), "negative probability " + entry.prob.str());
        act.to.push_back(std::move(entry));
      }
      st.actions.push_back(std::move(act));
    }
    arena.states.push_back(std::move(st));
  }

  // Second pass: resolve successors and check distributions.
  for (std::size_t si = 0; si < arena.states.size(); ++si) {
    for (std::size_t ai = 0; ai < arena.states[si].actions.size(); ++ai) {
      ArenaAction& act = arena.states[si].actions[ai];
      const std::string aloc = idx(idx("", "states", si), "actions", ai);
      Rational sum(0);
      for (std::size_t ti = 0; ti < act.to.size(); ++ti) {
        SuccessorEntry& entry = act.to[ti];
        entry.state_index = arena.index_of(entry.state);
        if (entry.state_index < 0)
          throw ValidationError(at(idx(aloc, "to", ti), "state"),
                                "dangling successor \"" + entry.state + "\"");
        sum += entry.prob;
      }
      if (sum != Rational(1))
        throw ValidationError(aloc, "probabilities sum to " + sum.str() + " != 1");
    }
  }
  return arena;
}

Arena parse_arena(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("", std::string("not valid JSON: ") + e.what());
  }
  return validate_arena(doc);
}

Arena load_arena_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_arena(buf.str());
  } catch (ValidationError& e) {
    throw ValidationError(path + (e.location.empty() ? "" : ":" + e.location), e.message);
  }
}

nlohmann::json serialize_arena(const Arena& arena) {
  json jstates = json::array();
  for (const ArenaState& st : arena.states) {
    json js;
    js["id"] = st.id;
    js["controller"] = st.controller == Controller::Max ? "max" : "min";
    js["reward"] = st.reward.str();
    if (st.weight) js["weight"] = st.weight->str();
    if (st.priority) js["priority"] = *st.priority;
    if (st.discount) js["discount"] = st.discount->str();
    json jactions = json::array();
    for (const ArenaAction& act : st.actions) {
      json ja;
      ja["label"] = act.label;
      json jto = json::array();
      for (const SuccessorEntry& entry : act.to)
        jto.push_back(json{{"state", entry.state}, {"prob", entry.prob.str()}});
      ja["to"] = std::move(jto);
      jactions.push_back(std::move(ja));
    }
    js["actions"] = std::move(jactions);
    jstates.push_back(std::move(js));
  }
  return json{{"states", std::move(jstates)}};
}

WeightedPrioritySystem weighted_priority_system(const Arena& arena) {
  WeightedPrioritySystem system;
  for (const ArenaState& st : arena.states) {
    if (!st.weight)
      throw ValidationError(st.id, "state has no weight (required by this operation)");
    if (!st.priority)
      throw ValidationError(st.id, "state has no priority (required by this operation)");
    system.weight[st.id] = *st.weight;
    system.priority[st.id] = *st.priority;
  }
  validate_system(arena, system);
  return system;
}

void validate_system(const Arena& arena, const WeightedPrioritySystem& system) {
  if (system.weight.size() != arena.size() || system.priority.size() != arena.size())
    throw ValidationError("", "weighted priority system must cover exactly the state set");
  for (const ArenaState& st : arena.states) {
    auto w = system.weight.find(st.id);
    auto p = system.priority.find(st.id);
    if (w == system.weight.end() || p == system.priority.end())
      throw ValidationError(st.id, "missing from weighted priority system");
    if (w->second.sign() <= 0)
      throw ValidationError(st.id, "weight must be > 0, got " + w->second.str());
    if (p->second < 1)
      throw ValidationError(st.id, "priority must be >= 1, got " + std::to_string(p->second));
  }
}

void validate_profile(const Arena& arena, const StrategyProfile& profile) {
  std::size_t max_states = 0;
  std::size_t min_states = 0;
  for (const ArenaState& st : arena.states) {
    const bool is_max = st.controller == Controller::Max;
    const auto& choice = is_max ? profile.max_choice : profile.min_choice;
    (is_max ? max_states : min_states)++;
    auto it = choice.find(st.id);
    if (it == choice.end())
      throw ValidationError(st.id, "no action chosen for controlled state");
    bool found = false;
    for (const ArenaAction& act : st.actions) found = found || act.label == it->second;
    if (!found)
      throw ValidationError(st.id, "chosen action \"" + it->second + "\" does not exist");
  }
  if (profile.max_choice.size() != max_states || profile.min_choice.size() != min_states)
    throw ValidationError("", "profile maps states outside the arena");
}

std::vector<int> profile_choices(const Arena& arena, const StrategyProfile& profile) {
  validate_profile(arena, profile);
  std::vector<int> choices(arena.size(), -1);
  for (std::size_t si = 0; si < arena.size(); ++si) {
    const ArenaState& st = arena.states[si];
    const auto& choice =
        st.controller == Controller::Max ? profile.max_choice : profile.min_choice;
    const std::string& label = choice.at(st.id);
    for (std::size_t ai = 0; ai < st.actions.size(); ++ai)
      if (st.actions[ai].label == label) choices[si] = static_cast<int>(ai);
  }
  return choices;
}

StrategyProfile profile_from_choices(const Arena& arena, const std::vector<int>& choices) {
  StrategyProfile profile;
  for (std::size_t si = 0; si < arena.size(); ++si) {
    const ArenaState& st = arena.states[si];
    const std::string& label = st.actions.at(static_cast<std::size_t>(choices.at(si))).label;
    if (st.controller == Controller::Max) profile.max_choice[st.id] = label;
    else profile.min_choice[st.id] = label;
  }
  return profile;
}

void validate_play(const Arena& arena, const Play& play) {
  if (play.states.empty()) throw ValidationError("", "play must contain at least one state");
  if (play.actions.size() + 1 != play.states.size())
    throw ValidationError("", "play needs exactly one action between consecutive states");
  for (std::size_t i = 0; i < play.states.size(); ++i)
    if (play.states[i] < 0 || static_cast<std::size_t>(play.states[i]) >= arena.size())
      throw ValidationError("", "play state index out of range");
  for (std::size_t i = 0; i < play.actions.size(); ++i) {
    const ArenaState& st = arena.state(static_cast<std::size_t>(play.states[i]));
    if (play.actions[i] < 0 || static_cast<std::size_t>(play.actions[i]) >= st.actions.size())
      throw ValidationError(st.id, "illegal play step: no such action");
    const ArenaAction& act = st.actions[static_cast<std::size_t>(play.actions[i])];
    Rational prob(0);
    for (const SuccessorEntry& entry : act.to)
      if (entry.state_index == play.states[i + 1]) prob += entry.prob;
    if (prob.sign() <= 0)
      throw ValidationError(st.id, "illegal play step: successor has probability 0 under \"" +
                                       act.label + "\"");
  }
}

ProfileSpace::ProfileSpace(const Arena& arena) : arena_(&arena), total_(1) {
  for (const ArenaState& st : arena.states) {
    total_ *= static_cast<unsigned long>(st.actions.size());
    auto& count = st.controller == Controller::Max ? max_count_ : min_count_;
    // Per-player strategy counts stay in size_t range for any arena whose
    // total profile count passes a budget check.
    count *= st.actions.size();
  }
}

std::size_t ProfileSpace::total_checked(std::size_t budget) const {
  if (total_ > static_cast<unsigned long>(budget))
    throw BudgetError("profile enumeration budget exceeded: " + total_.get_str() + " > " +
                      std::to_string(budget));
  return static_cast<std::size_t>(total_.get_ui());
}

std::vector<int> ProfileSpace::choices_of(std::size_t max_index, std::size_t min_index) const {
  std::vector<int> choices(arena_->size(), 0);
  // Mixed-radix decode, last state least significant, per player.
  for (std::size_t si = arena_->size(); si-- > 0;) {
    const ArenaState& st = arena_->states[si];
    auto& index = st.controller == Controller::Max ? max_index : min_index;
    choices[si] = static_cast<int>(index % st.actions.size());
    index /= st.actions.size();
  }
  return choices;
}

StrategyProfile ProfileSpace::profile_at(std::size_t global_index) const {
  std::vector<int> choices(arena_->size(), 0);
  for (std::size_t si = arena_->size(); si-- > 0;) {
    const std::size_t na = arena_->states[si].actions.size();
    choices[si] = static_cast<int>(global_index % na);
    global_index /= na;
  }
  return profile_from_choices(*arena_, choices);
}

StrategyProfile ProfileSpace::combine(std::size_t max_index, std::size_t min_index) const {
  return profile_from_choices(*arena_, choices_of(max_index, min_index));
}

std::size_t ProfileSpace::global_index(std::size_t max_index, std::size_t min_index) const {
  std::vector<int> choices = choices_of(max_index, min_index);
  std::size_t global = 0;
  for (std::size_t si = 0; si < arena_->size(); ++si)
    global = global * arena_->states[si].actions.size() + static_cast<std::size_t>(choices[si]);
  return global;
}

std::vector<StrategyProfile> enumerate_profiles(const Arena& arena, std::size_t budget) {
  ProfileSpace space(arena);
  const std::size_t total = space.total_checked(budget);
  std::vector<StrategyProfile> profiles;
  profiles.reserve(total);
  for (std::size_t i = 0; i < total; ++i) profiles.push_back(space.profile_at(i));
  return profiles;
}

std::vector<std::vector<Rational>> induced_chain(const Arena& arena,
                                                 const StrategyProfile& profile) {
  const std::vector<int> choices = profile_choices(arena, profile);
  std::vector<std::vector<Rational>> matrix(arena.size(),
                                            std::vector<Rational>(arena.size(), Rational(0)));
  for (std::size_t si = 0; si < arena.size(); ++si) {
    const ArenaAction& act = arena.states[si].actions[static_cast<std::size_t>(choices[si])];
    for (const SuccessorEntry& entry : act.to)
      matrix[si][static_cast<std::size_t>(entry.state_index)] += entry.prob;
  }
  return matrix;
}

}  // namespace pmpg
