#include "pmpg/discounted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace pmpg {

DiscountMap DiscountMap::constant(const Arena& arena, const Rational& value) {
  DiscountMap d;
  for (const ArenaState& st : arena.states) d.lambda[st.id] = value;
  return d;
}

void validate_discounts(const Arena& arena, const DiscountMap& discounts) {
  if (discounts.lambda.size() != arena.size())
    throw ValidationError("", "discount map must cover exactly the state set");
  for (const ArenaState& st : arena.states) {
    auto it = discounts.lambda.find(st.id);
    if (it == discounts.lambda.end())
      throw ValidationError(st.id, "missing discount factor");
    if (it->second.sign() < 0 || it->second >= Rational(1))
      throw ValidationError(st.id, "discount factor " + it->second.str() + " outside [0, 1)");
  }
}

std::vector<Rational> discounts_by_index(const Arena& arena, const DiscountMap& discounts) {
  validate_discounts(arena, discounts);
  std::vector<Rational> lambda(arena.size());
  for (std::size_t i = 0; i < arena.size(); ++i)
    lambda[i] = discounts.lambda.at(arena.state(i).id);
  return lambda;
}

Rational discounted_payoff_of_play(const Arena& arena, const Play& prefix,
                                   const DiscountMap& discounts) {
  validate_play(arena, prefix);
  const std::vector<Rational> lambda = discounts_by_index(arena, discounts);
  Rational carried(1);  // lambda(s_0)...lambda(s_{i-1})
  Rational sum(0);
  for (int si : prefix.states) {
    const auto s = static_cast<std::size_t>(si);
    sum += carried * (Rational(1) - lambda[s]) * arena.state(s).reward;
    carried *= lambda[s];
  }
  return sum;
}

std::vector<Rational> eval_profile_discounted(const Arena& arena, const DiscountMap& discounts,
                                              const StrategyProfile& profile) {
  return eval_profile_discounted_generic<Rational>(arena, discounts_by_index(arena, discounts),
                                                   profile);
}

std::vector<double> apply_shapley_operator(const Arena& arena, const std::vector<double>& lambda,
                                           const std::vector<double>& x) {
  std::vector<double> out(arena.size());
  for (std::size_t s = 0; s < arena.size(); ++s) {
    const ArenaState& st = arena.state(s);
    const bool maximize = st.controller == Controller::Max;
    double best = maximize ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    for (const ArenaAction& act : st.actions) {
      double expect = 0.0;
      for (const SuccessorEntry& entry : act.to)
        expect += entry.prob.to_double() * x[static_cast<std::size_t>(entry.state_index)];
      double value = (1.0 - lambda[s]) * st.reward.to_double() + lambda[s] * expect;
      best = maximize ? std::max(best, value) : std::min(best, value);
    }
    out[s] = best;
  }
  return out;
}

namespace {

StrategyProfile greedy_profile(const Arena& arena, const std::vector<double>& lambda,
                               const std::vector<double>& x) {
  std::vector<int> choices(arena.size(), 0);
  for (std::size_t s = 0; s < arena.size(); ++s) {
    const ArenaState& st = arena.state(s);
    const bool maximize = st.controller == Controller::Max;
    double best = 0.0;
    for (std::size_t ai = 0; ai < st.actions.size(); ++ai) {
      double expect = 0.0;
      for (const SuccessorEntry& entry : st.actions[ai].to)
        expect += entry.prob.to_double() * x[static_cast<std::size_t>(entry.state_index)];
      double value = (1.0 - lambda[s]) * st.reward.to_double() + lambda[s] * expect;
      // Strict improvement only: ties resolve to the earliest action.
      if (ai == 0 || (maximize ? value > best : value < best)) {
        best = value;
        choices[s] = static_cast<int>(ai);
      }
    }
  }
  return profile_from_choices(arena, choices);
}

}  // namespace

DiscountedSolveResult solve_discounted(const Arena& arena, const DiscountMap& discounts,
                                       double tolerance, std::size_t max_iter) {
  if (!(tolerance > 0)) throw std::invalid_argument("tolerance must be > 0");
  const std::vector<Rational> lambda_exact = discounts_by_index(arena, discounts);
  std::vector<double> lambda(arena.size());
  double lambda_max = 0.0;
  for (std::size_t s = 0; s < arena.size(); ++s) {
    lambda[s] = lambda_exact[s].to_double();
    lambda_max = std::max(lambda_max, lambda[s]);
  }
  // Gap threshold making the true error at most `tolerance`:
  // ||x_n - x*|| <= lambda/(1-lambda) * ||x_n - x_{n-1}||.
  const double threshold = lambda_max > 0.0 ? tolerance * (1.0 - lambda_max) / lambda_max : 0.0;

  std::vector<double> x(arena.size(), 0.0);
  double gap = std::numeric_limits<double>::infinity();
  std::size_t iter = 0;
  while (iter < max_iter) {
    std::vector<double> next = apply_shapley_operator(arena, lambda, x);
    gap = 0.0;
    for (std::size_t s = 0; s < arena.size(); ++s)
      gap = std::max(gap, std::abs(next[s] - x[s]));
    x = std::move(next);
    ++iter;
    if (gap <= threshold) {
      DiscountedSolveResult result;
      for (std::size_t s = 0; s < arena.size(); ++s) result.values[arena.state(s).id] = x[s];
      result.profile = greedy_profile(arena, lambda, x);
      result.residual = gap;
      result.iterations = iter;
      return result;
    }
  }
  throw ConvergenceError(std::move(x), iter, gap);
}

Arena star_transform(const Arena& arena, const DiscountMap& discounts) {
  const std::vector<Rational> lambda = discounts_by_index(arena, discounts);
  std::set<std::string> used;
  for (const ArenaState& st : arena.states) used.insert(st.id);
  std::vector<std::string> star_ids(arena.size());
  for (std::size_t s = 0; s < arena.size(); ++s) {
    std::string candidate = arena.state(s).id + "*";
    while (!used.insert(candidate).second) candidate += "*";
    star_ids[s] = candidate;
  }

  Arena out;
  const std::size_t n = arena.size();
  out.states.reserve(2 * n);
  for (std::size_t s = 0; s < n; ++s) {
    const ArenaState& st = arena.state(s);
    ArenaState copy;
    copy.id = st.id;
    copy.controller = st.controller;
    copy.reward = st.reward;
    copy.weight = Rational(1);
    copy.priority = 1;
    for (const ArenaAction& act : st.actions) {
      ArenaAction scaled;
      scaled.label = act.label;
      for (const SuccessorEntry& entry : act.to) {
        Rational p = lambda[s] * entry.prob;
        if (p.is_zero()) continue;
        scaled.to.push_back({entry.state, entry.state_index, p});
      }
      Rational stop = Rational(1) - lambda[s];
      scaled.to.push_back({star_ids[s], static_cast<int>(n + s), stop});
      copy.actions.push_back(std::move(scaled));
    }
    out.states.push_back(std::move(copy));
  }
  for (std::size_t s = 0; s < n; ++s) {
    const ArenaState& st = arena.state(s);
    ArenaState star;
    star.id = star_ids[s];
    star.controller = st.controller;
    star.reward = st.reward;
    star.weight = Rational(1);
    star.priority = 1;
    ArenaAction loop;
    loop.label = "star";
    loop.to.push_back({star.id, static_cast<int>(n + s), Rational(1)});
    star.actions.push_back(std::move(loop));
    out.states.push_back(std::move(star));
  }
  return out;
}

}  // namespace pmpg
