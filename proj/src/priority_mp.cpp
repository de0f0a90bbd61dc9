#include "pmpg/priority_mp.hpp"

#include <algorithm>

#include "pmpg/linsolve.hpp"
#include "pmpg/parallel.hpp"

namespace pmpg {

namespace {

// Iterative Tarjan over the positive-probability support graph restricted to
// `reachable`. Returns components; `bottom[i]` marks components with no edge
// leaving them.
struct SccResult {
  std::vector<std::vector<int>> components;
  std::vector<bool> bottom;
};

SccResult bottom_sccs(const std::vector<std::vector<Rational>>& chain,
                      const std::vector<int>& reachable) {
  const std::size_t n = chain.size();
  std::vector<bool> in_scope(n, false);
  for (int s : reachable) in_scope[static_cast<std::size_t>(s)] = true;

  std::vector<int> index(n, -1), lowlink(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  SccResult result;
  int next_index = 0;

  struct Frame {
    int v;
    std::size_t next_succ;
  };

  auto successors = [&](int v) {
    std::vector<int> out;
    for (std::size_t w = 0; w < n; ++w)
      if (chain[static_cast<std::size_t>(v)][w].sign() > 0) out.push_back(static_cast<int>(w));
    return out;
  };

  std::vector<std::vector<int>> succ(n);
  for (int v : reachable) succ[static_cast<std::size_t>(v)] = successors(v);

  for (int root : reachable) {
    if (index[static_cast<std::size_t>(root)] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[static_cast<std::size_t>(root)] = lowlink[static_cast<std::size_t>(root)] = next_index++;
    stack.push_back(root);
    on_stack[static_cast<std::size_t>(root)] = true;
    while (!frames.empty()) {
      Frame& frame = frames.back();
      const auto v = static_cast<std::size_t>(frame.v);
      if (frame.next_succ < succ[v].size()) {
        int w = succ[v][frame.next_succ++];
        const auto wi = static_cast<std::size_t>(w);
        if (index[wi] == -1) {
          index[wi] = lowlink[wi] = next_index++;
          stack.push_back(w);
          on_stack[wi] = true;
          frames.push_back({w, 0});
        } else if (on_stack[wi]) {
          lowlink[v] = std::min(lowlink[v], index[wi]);
        }
      } else {
        if (lowlink[v] == index[v]) {
          std::vector<int> component;
          for (;;) {
            int w = stack.back();
            stack.pop_back();
            on_stack[static_cast<std::size_t>(w)] = false;
            comp[static_cast<std::size_t>(w)] = static_cast<int>(result.components.size());
            component.push_back(w);
            if (w == frame.v) break;
          }
          std::sort(component.begin(), component.end());
          result.components.push_back(std::move(component));
        }
        int finished = frame.v;
        frames.pop_back();
        if (!frames.empty()) {
          const auto p = static_cast<std::size_t>(frames.back().v);
          lowlink[p] = std::min(lowlink[p], lowlink[static_cast<std::size_t>(finished)]);
        }
      }
    }
  }

  result.bottom.assign(result.components.size(), true);
  for (int v : reachable)
    for (int w : succ[static_cast<std::size_t>(v)])
      if (comp[static_cast<std::size_t>(v)] != comp[static_cast<std::size_t>(w)])
        result.bottom[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])] = false;
  return result;
}

// Unique stationary distribution of the chain restricted to an irreducible
// closed class: (P^T - I) xi = 0 with one equation replaced by sum xi = 1.
std::map<int, Rational> stationary_distribution(const std::vector<std::vector<Rational>>& chain,
                                                const std::vector<int>& component) {
  const std::size_t m = component.size();
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m, Rational(0)));
  std::vector<Rational> b(m, Rational(0));
  for (std::size_t r = 0; r + 1 < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      a[r][c] = chain[static_cast<std::size_t>(component[c])][static_cast<std::size_t>(component[r])];
      if (r == c) a[r][c] -= Rational(1);
    }
  }
  for (std::size_t c = 0; c < m; ++c) a[m - 1][c] = Rational(1);
  b[m - 1] = Rational(1);
  std::vector<Rational> xi = solve_linear(a, b);
  std::map<int, Rational> out;
  for (std::size_t i = 0; i < m; ++i) {
    if (xi[i].sign() <= 0)
      throw InvariantViolation("stationary distribution not strictly positive");
    out[component[i]] = xi[i];
  }
  return out;
}

}  // namespace

ChainAnalysis analyze_chain(const Arena& arena, const StrategyProfile& profile, int initial,
                            const WeightedPrioritySystem& system) {
  validate_system(arena, system);
  if (initial < 0 || static_cast<std::size_t>(initial) >= arena.size())
    throw std::invalid_argument("initial state index out of range");
  const auto chain = induced_chain(arena, profile);
  const std::size_t n = arena.size();

  ChainAnalysis analysis;
  analysis.initial = initial;

  // Reachable support from the initial state.
  std::vector<bool> seen(n, false);
  std::vector<int> queue{initial};
  seen[static_cast<std::size_t>(initial)] = true;
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    analysis.reachable.push_back(v);
    for (std::size_t w = 0; w < n; ++w) {
      if (!seen[w] && chain[static_cast<std::size_t>(v)][w].sign() > 0) {
        seen[w] = true;
        queue.push_back(static_cast<int>(w));
      }
    }
  }
  std::sort(analysis.reachable.begin(), analysis.reachable.end());

  SccResult sccs = bottom_sccs(chain, analysis.reachable);
  std::vector<int> class_of(n, -1);
  for (std::size_t ci = 0; ci < sccs.components.size(); ++ci) {
    if (!sccs.bottom[ci]) continue;
    for (int v : sccs.components[ci])
      class_of[static_cast<std::size_t>(v)] = static_cast<int>(analysis.recurrent_classes.size());
    analysis.recurrent_classes.push_back(sccs.components[ci]);
  }

  for (const auto& component : analysis.recurrent_classes) {
    int priority = system.priority.at(arena.state(static_cast<std::size_t>(component[0])).id);
    for (int v : component)
      priority = std::min(priority, system.priority.at(arena.state(static_cast<std::size_t>(v)).id));
    analysis.class_priority.push_back(priority);
    analysis.stationary.push_back(stationary_distribution(chain, component));
  }

  // Absorption probabilities from the initial state, one exact solve over the
  // reachable transient states per class.
  std::vector<int> transient;
  for (int v : analysis.reachable)
    if (class_of[static_cast<std::size_t>(v)] < 0) transient.push_back(v);

  analysis.absorption.assign(analysis.recurrent_classes.size(), Rational(0));
  const int init_class = class_of[static_cast<std::size_t>(initial)];
  if (init_class >= 0) {
    analysis.absorption[static_cast<std::size_t>(init_class)] = Rational(1);
  } else {
    std::vector<int> pos_of(n, -1);
    for (std::size_t i = 0; i < transient.size(); ++i)
      pos_of[static_cast<std::size_t>(transient[i])] = static_cast<int>(i);
    const std::size_t m = transient.size();
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m, Rational(0)));
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) {
        a[r][c] = (r == c ? Rational(1) : Rational(0)) -
                  chain[static_cast<std::size_t>(transient[r])][static_cast<std::size_t>(transient[c])];
      }
    for (std::size_t ci = 0; ci < analysis.recurrent_classes.size(); ++ci) {
      std::vector<Rational> b(m, Rational(0));
      for (std::size_t r = 0; r < m; ++r)
        for (int v : analysis.recurrent_classes[ci])
          b[r] += chain[static_cast<std::size_t>(transient[r])][static_cast<std::size_t>(v)];
      std::vector<Rational> x = solve_linear(a, b);
      analysis.absorption[ci] = x[static_cast<std::size_t>(pos_of[static_cast<std::size_t>(initial)])];
    }
  }

  Rational total(0);
  for (const Rational& p : analysis.absorption) total += p;
  if (total != Rational(1)) throw InvariantViolation("absorption probabilities do not sum to 1");
  return analysis;
}

std::optional<Rational> pmp_payoff_of_play_prefix(const Arena& arena, const Play& prefix,
                                                  const WeightedPrioritySystem& system,
                                                  int assumed_priority) {
  validate_play(arena, prefix);
  validate_system(arena, system);
  Rational numerator(0), denominator(0);
  for (int si : prefix.states) {
    const ArenaState& st = arena.state(static_cast<std::size_t>(si));
    if (system.priority.at(st.id) != assumed_priority) continue;
    const Rational& w = system.weight.at(st.id);
    numerator += w * st.reward;
    denominator += w;
  }
  if (denominator.is_zero()) return std::nullopt;
  return numerator / denominator;
}

namespace {

Rational class_value(const Arena& arena, const WeightedPrioritySystem& system,
                     const std::vector<int>& component, int class_priority,
                     const std::map<int, Rational>& stationary) {
  Rational numerator(0), denominator(0);
  for (int v : component) {
    const ArenaState& st = arena.state(static_cast<std::size_t>(v));
    if (system.priority.at(st.id) != class_priority) continue;
    Rational mass = stationary.at(v) * system.weight.at(st.id);
    numerator += mass * st.reward;
    denominator += mass;
  }
  if (denominator.sign() <= 0)
    throw InvariantViolation("class value denominator must be positive");
  return numerator / denominator;
}

}  // namespace

std::vector<Rational> eval_profile_pmp(const Arena& arena, const StrategyProfile& profile,
                                       const WeightedPrioritySystem& system) {
  std::vector<Rational> values(arena.size(), Rational(0));
  for (std::size_t s = 0; s < arena.size(); ++s) {
    ChainAnalysis analysis = analyze_chain(arena, profile, static_cast<int>(s), system);
    Rational value(0);
    for (std::size_t ci = 0; ci < analysis.recurrent_classes.size(); ++ci) {
      if (analysis.absorption[ci].is_zero()) continue;
      value += analysis.absorption[ci] *
               class_value(arena, system, analysis.recurrent_classes[ci],
                           analysis.class_priority[ci], analysis.stationary[ci]);
    }
    values[s] = value;
  }
  return values;
}

PmpSolveResult solve_pmp_bruteforce(const Arena& arena, const WeightedPrioritySystem& system,
                                    std::size_t budget) {
  validate_system(arena, system);
  ProfileSpace space(arena);
  space.total_checked(budget);
  const std::size_t n_max = space.max_count();
  const std::size_t n_min = space.min_count();
  const std::size_t n = arena.size();

  // Exact value vectors for every profile pair.
  std::vector<std::vector<Rational>> table(n_max * n_min);
  parallel_for(n_max * n_min, [&](std::size_t k) {
    table[k] = eval_profile_pmp(arena, space.combine(k / n_min, k % n_min), system);
  });
  auto value = [&](std::size_t i, std::size_t j) -> const std::vector<Rational>& {
    return table[i * n_min + j];
  };

  // Pointwise maximin and minimax; Theorem guarantees they coincide.
  std::vector<Rational> maximin(n), minimax(n);
  for (std::size_t s = 0; s < n; ++s) {
    bool first_i = true;
    for (std::size_t i = 0; i < n_max; ++i) {
      Rational row_min(0);
      bool first_j = true;
      for (std::size_t j = 0; j < n_min; ++j) {
        const Rational& v = value(i, j)[s];
        if (first_j || v < row_min) row_min = v;
        first_j = false;
      }
      if (first_i || row_min > maximin[s]) maximin[s] = row_min;
      first_i = false;
    }
    first_i = true;
    for (std::size_t j = 0; j < n_min; ++j) {
      Rational col_max(0);
      bool first_j = true;
      for (std::size_t i = 0; i < n_max; ++i) {
        const Rational& v = value(i, j)[s];
        if (first_j || v > col_max) col_max = v;
        first_j = false;
      }
      if (first_i || col_max < minimax[s]) minimax[s] = col_max;
      first_i = false;
    }
  }
  if (maximin != minimax)
    throw InvariantViolation("maximin and minimax differ on the profile enumeration");

  // Saddle points: no unilateral deviation helps at any state.
  PmpSolveResult result;
  result.values = maximin;
  bool found = false;
  std::size_t best_rank = 0;
  std::size_t best_i = 0, best_j = 0;
  for (std::size_t i = 0; i < n_max; ++i) {
    for (std::size_t j = 0; j < n_min; ++j) {
      bool saddle = value(i, j) == maximin;
      for (std::size_t d = 0; saddle && d < n_max; ++d)
        for (std::size_t s = 0; saddle && s < n; ++s)
          if (value(d, j)[s] > maximin[s]) saddle = false;
      for (std::size_t d = 0; saddle && d < n_min; ++d)
        for (std::size_t s = 0; saddle && s < n; ++s)
          if (value(i, d)[s] < maximin[s]) saddle = false;
      if (!saddle) continue;
      ++result.saddle_count;
      StrategyProfile profile = space.combine(i, j);
      for (const auto& [state, label] : profile.max_choice)
        result.optimal_max_choices[state].insert(label);
      for (const auto& [state, label] : profile.min_choice)
        result.optimal_min_choices[state].insert(label);
      std::size_t rank = space.global_index(i, j);
      if (!found || rank < best_rank) {
        found = true;
        best_rank = rank;
        best_i = i;
        best_j = j;
      }
    }
  }
  if (!found)
    throw InvariantViolation("no simultaneous saddle profile found in the enumeration");
  result.profile = space.combine(best_i, best_j);
  return result;
}

ParityEncoding parity_encoding(const std::map<std::string, int>& priorities) {
  ParityEncoding encoding;
  for (const auto& [id, priority] : priorities) {
    if (priority < 1) throw std::invalid_argument("priorities must be >= 1");
    encoding.system.weight[id] = Rational(1);
    encoding.system.priority[id] = priority;
    encoding.rewards[id] = Rational(priority % 2 == 0 ? 1 : 0);
  }
  return encoding;
}

Arena apply_parity_encoding(const Arena& arena) {
  std::map<std::string, int> priorities;
  for (const ArenaState& st : arena.states) {
    if (!st.priority) throw ValidationError(st.id, "state has no priority to encode");
    priorities[st.id] = *st.priority;
  }
  ParityEncoding encoding = parity_encoding(priorities);
  Arena out = arena;
  for (ArenaState& st : out.states) {
    st.reward = encoding.rewards.at(st.id);
    st.weight = Rational(1);
  }
  return out;
}

}  // namespace pmpg
