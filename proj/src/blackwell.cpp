#include "pmpg/blackwell.hpp"

#include <algorithm>

#include "pmpg/parallel.hpp"
#include "pmpg/sturm.hpp"

namespace pmpg {

namespace {

Rational pow2_neg(int k) { return Rational(Integer(1), Integer(1) << k); }

}  // namespace

DiscountParametrization canonical_parametrization(const WeightedPrioritySystem& system) {
  DiscountParametrization param;
  const RationalFunction one_minus_t(Polynomial(std::vector<Rational>{Rational(1), Rational(-1)}),
                                     Polynomial(Rational(1)));
  for (const auto& [id, w] : system.weight) {
    if (w.sign() <= 0) throw std::invalid_argument("weights must be > 0");
    int priority = system.priority.at(id);
    if (priority < 1) throw std::invalid_argument("priorities must be >= 1");
    param.lambda[id] =
        RationalFunction(1) - RationalFunction(w) * one_minus_t.pow(static_cast<unsigned>(priority));
  }
  // Largest epsilon = 2^-k with w(s) epsilon^pi(s) < 1 for every state; then
  // on [1-eps, 1) each 1-lambda lies in (0, w eps^pi] inside (0,1).
  for (int k = 1; k <= 64; ++k) {
    Rational eps = pow2_neg(k);
    bool ok = true;
    for (const auto& [id, w] : system.weight)
      ok = ok && w * eps.pow(static_cast<unsigned>(system.priority.at(id))) < Rational(1);
    if (ok) {
      param.epsilon = eps;
      return param;
    }
  }
  throw std::invalid_argument("no epsilon of the form 2^-k (k <= 64) certifies this system");
}

namespace {

// Certifies lambda in [0,1) on [1-eps, 1) for an explicit rational function:
// sign conditions at 1- plus Sturm counts showing no root or pole of lambda
// or 1-lambda meets the interval; halves eps until the counts vanish.
Rational certify_interval(const std::string& id, const RationalFunction& lambda,
                          Rational eps, std::vector<std::string>* notes) {
  const RationalFunction one_minus = RationalFunction(1) - lambda;
  if (one_minus.is_zero())
    throw ValidationError(id, "discount is identically 1");
  SignAtOneMinus limit = sign_near_one(one_minus);
  if (limit.sign != 1 || limit.vanishing_order < 1)
    throw ValidationError(id, "discount does not tend to 1 from inside [0,1) as t->1-");
  if (sign_near_one(lambda).sign < 0)
    throw ValidationError(id, "discount is negative near t=1-");

  std::vector<Polynomial> guards;
  if (lambda.num().degree() > 0) guards.push_back(lambda.num());
  if (lambda.den().degree() > 0) guards.push_back(lambda.den());
  if (one_minus.num().degree() > 0) guards.push_back(one_minus.num());
  if (one_minus.den().degree() > 0) guards.push_back(one_minus.den());

  const Rational original = eps;
  const Rational one(1);
  for (int halvings = 0; halvings <= 256; ++halvings) {
    bool clear = true;
    for (const Polynomial& g : guards) {
      // Roots at t=1 itself are expected (1-lambda vanishes there); the
      // half-open interval [1-eps, 1) excludes them.
      if (count_roots_in(g, one - eps, one) > 0) {
        clear = false;
        break;
      }
    }
    if (clear) {
      if (notes && eps != original)
        notes->push_back("state " + id + ": epsilon shrunk to " + eps.str() +
                         " to clear roots/poles of the discount");
      return eps;
    }
    eps = eps / Rational(2);
  }
  throw ValidationError(id, "cannot certify an interval: roots persist arbitrarily close to 1");
}

}  // namespace

DiscountParametrization make_parametrization(const Arena& arena) {
  bool any_discount = false;
  bool all_discount = true;
  for (const ArenaState& st : arena.states) {
    any_discount = any_discount || st.discount.has_value();
    all_discount = all_discount && st.discount.has_value();
  }
  if (any_discount && !all_discount)
    throw ValidationError("", "either every state or no state may carry a discount expression");

  if (!any_discount) return canonical_parametrization(weighted_priority_system(arena));

  DiscountParametrization param;
  for (const ArenaState& st : arena.states) param.lambda[st.id] = *st.discount;
  param.epsilon = Rational(1, 2);
  for (const ArenaState& st : arena.states)
    param.epsilon =
        certify_interval(st.id, param.lambda[st.id], param.epsilon, &param.certification_notes);
  return param;
}

void validate_parametrization(const Arena& arena, const DiscountParametrization& param) {
  if (param.lambda.size() != arena.size())
    throw ValidationError("", "parametrization must cover exactly the state set");
  for (const ArenaState& st : arena.states)
    if (param.lambda.find(st.id) == param.lambda.end())
      throw ValidationError(st.id, "missing discount parametrization");
  if (param.epsilon.sign() <= 0 || param.epsilon >= Rational(1))
    throw ValidationError("", "epsilon must lie in (0,1)");
}

std::vector<RationalFunction> parametrization_by_index(const Arena& arena,
                                                       const DiscountParametrization& param) {
  validate_parametrization(arena, param);
  std::vector<RationalFunction> lambda(arena.size());
  for (std::size_t s = 0; s < arena.size(); ++s) lambda[s] = param.lambda.at(arena.state(s).id);
  return lambda;
}

DiscountMap evaluate_parametrization(const Arena& arena, const DiscountParametrization& param,
                                     const Rational& t0) {
  validate_parametrization(arena, param);
  DiscountMap discounts;
  for (const auto& [id, f] : param.lambda) {
    Rational v = f.eval_at(t0);
    if (v.sign() < 0 || v >= Rational(1))
      throw ValidationError(id, "discount " + v.str() + " at t=" + t0.str() + " outside [0,1)");
    discounts.lambda[id] = v;
  }
  return discounts;
}

WeightedPrioritySystem derive_system(const DiscountParametrization& param) {
  WeightedPrioritySystem system;
  for (const auto& [id, lambda] : param.lambda) {
    RationalFunction one_minus = RationalFunction(1) - lambda;
    if (one_minus.is_zero()) throw ValidationError(id, "1 - lambda_t is identically zero");
    ZeroOrderAtOne num = zero_order_at_one(one_minus.num());
    ZeroOrderAtOne den = zero_order_at_one(one_minus.den());
    if (den.multiplicity != 0)
      throw ValidationError(id, "1 - lambda_t has a pole at t=1");
    if (num.multiplicity < 1)
      throw ValidationError(id, "1 - lambda_t does not vanish at t=1");
    Rational weight = num.deflated_value / den.deflated_value;
    if (weight.sign() <= 0)
      throw ValidationError(id, "derived weight " + weight.str() + " is not positive");
    system.priority[id] = static_cast<int>(num.multiplicity);
    system.weight[id] = weight;
  }
  return system;
}

std::vector<RationalFunction> eval_profile_discounted_symbolic(
    const Arena& arena, const DiscountParametrization& param, const StrategyProfile& profile) {
  return eval_profile_discounted_generic<RationalFunction>(
      arena, parametrization_by_index(arena, param), profile);
}

namespace {

struct ProfileTable {
  ProfileSpace space;
  std::size_t n_max, n_min;
  std::vector<std::vector<RationalFunction>> values;  // (i * n_min + j) -> per state

  ProfileTable(const Arena& arena, const DiscountParametrization& param, std::size_t budget)
      : space(arena) {
    space.total_checked(budget);
    n_max = space.max_count();
    n_min = space.min_count();
    values.resize(n_max * n_min);
    parallel_for(n_max * n_min, [&](std::size_t k) {
      values[k] =
          eval_profile_discounted_symbolic(arena, param, space.combine(k / n_min, k % n_min));
    });
  }

  const std::vector<RationalFunction>& at(std::size_t i, std::size_t j) const {
    return values[i * n_min + j];
  }
};

std::vector<DeviationCheck> build_certificate(const Arena& arena, const ProfileTable& table,
                                              std::size_t i, std::size_t j) {
  std::vector<DeviationCheck> certificate;
  const auto& opt = table.at(i, j);
  for (std::size_t d = 0; d < table.n_max; ++d) {
    if (d == i) continue;
    const auto& dev = table.at(d, j);
    for (std::size_t s = 0; s < arena.size(); ++s) {
      SignAtOneMinus cmp = sign_near_one(RationalFunction(opt[s]) - dev[s]);
      certificate.push_back({arena.state(s).id, "max", table.space.combine(d, j), cmp.sign,
                             cmp.vanishing_order});
      if (cmp.sign < 0) return certificate;  // deviation is favorable: caller rejects
    }
  }
  for (std::size_t d = 0; d < table.n_min; ++d) {
    if (d == j) continue;
    const auto& dev = table.at(i, d);
    for (std::size_t s = 0; s < arena.size(); ++s) {
      SignAtOneMinus cmp = sign_near_one(RationalFunction(dev[s]) - opt[s]);
      certificate.push_back({arena.state(s).id, "min", table.space.combine(i, d), cmp.sign,
                             cmp.vanishing_order});
      if (cmp.sign < 0) return certificate;
    }
  }
  return certificate;
}

bool certificate_clean(const std::vector<DeviationCheck>& certificate) {
  for (const DeviationCheck& check : certificate)
    if (check.sign < 0) return false;
  return true;
}

BlackwellResult assemble_result(const Arena& arena, const ProfileTable& table, std::size_t i,
                                std::size_t j, std::vector<DeviationCheck> certificate,
                                std::string mode) {
  BlackwellResult result;
  result.profile = table.space.combine(i, j);
  for (std::size_t s = 0; s < arena.size(); ++s)
    result.value_functions[arena.state(s).id] = table.at(i, j)[s];
  result.certificate = std::move(certificate);
  result.mode_used = std::move(mode);
  for (const auto& [state, label] : result.profile.max_choice)
    result.optimal_max_choices[state].insert(label);
  for (const auto& [state, label] : result.profile.min_choice)
    result.optimal_min_choices[state].insert(label);
  return result;
}

}  // namespace

BlackwellResult blackwell_search_exact(const Arena& arena, const DiscountParametrization& param,
                                       std::size_t budget) {
  ProfileTable table(arena, param, budget);
  const std::size_t n = arena.size();
  const std::size_t n_max = table.n_max;
  const std::size_t n_min = table.n_min;

  // Per column j and state s: the set of row-maximal i in the near-1 order;
  // symmetrically per row i. A saddle is maximal in its column and minimal in
  // its row at every state.
  std::vector<std::vector<std::vector<bool>>> col_argmax(
      n_min, std::vector<std::vector<bool>>(n, std::vector<bool>(n_max, false)));
  parallel_for(n_min, [&](std::size_t j) {
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::size_t> best{0};
      for (std::size_t i = 1; i < n_max; ++i) {
        int cmp = compare_near_one(table.at(i, j)[s], table.at(best[0], j)[s]);
        if (cmp > 0) best = {i};
        else if (cmp == 0) best.push_back(i);
      }
      for (std::size_t i : best) col_argmax[j][s][i] = true;
    }
  });
  std::vector<std::vector<std::vector<bool>>> row_argmin(
      n_max, std::vector<std::vector<bool>>(n, std::vector<bool>(n_min, false)));
  parallel_for(n_max, [&](std::size_t i) {
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::size_t> best{0};
      for (std::size_t j = 1; j < n_min; ++j) {
        int cmp = compare_near_one(table.at(i, j)[s], table.at(i, best[0])[s]);
        if (cmp < 0) best = {j};
        else if (cmp == 0) best.push_back(j);
      }
      for (std::size_t j : best) row_argmin[i][s][j] = true;
    }
  });

  bool found = false;
  std::size_t best_rank = 0, best_i = 0, best_j = 0;
  std::map<std::string, std::set<std::string>> max_choices, min_choices;
  for (std::size_t i = 0; i < n_max; ++i) {
    for (std::size_t j = 0; j < n_min; ++j) {
      bool saddle = true;
      for (std::size_t s = 0; saddle && s < n; ++s)
        saddle = col_argmax[j][s][i] && row_argmin[i][s][j];
      if (!saddle) continue;
      StrategyProfile profile = table.space.combine(i, j);
      for (const auto& [state, label] : profile.max_choice) max_choices[state].insert(label);
      for (const auto& [state, label] : profile.min_choice) min_choices[state].insert(label);
      std::size_t rank = table.space.global_index(i, j);
      if (!found || rank < best_rank) {
        found = true;
        best_rank = rank;
        best_i = i;
        best_j = j;
      }
    }
  }
  if (!found)
    throw InvariantViolation(
        "no Blackwell-optimal profile found by exhaustive search (theorem guarantees one)");

  std::vector<DeviationCheck> certificate = build_certificate(arena, table, best_i, best_j);
  if (!certificate_clean(certificate))
    throw InvariantViolation("saddle candidate failed its own deviation certificate");
  BlackwellResult result =
      assemble_result(arena, table, best_i, best_j, std::move(certificate), "exact");
  result.optimal_max_choices = std::move(max_choices);
  result.optimal_min_choices = std::move(min_choices);
  return result;
}

BlackwellResult blackwell_search_hybrid(const Arena& arena, const DiscountParametrization& param,
                                        int k_start, int k_end, std::size_t budget) {
  if (k_start >= k_end) throw std::invalid_argument("need k_start < k_end");
  validate_parametrization(arena, param);
  const Rational floor = Rational(1) - param.epsilon;

  std::optional<StrategyProfile> candidate;
  int stable = 0;
  for (int k = k_start; k <= k_end && stable < 3; ++k) {
    Rational t = max(Rational(1) - pow2_neg(k), floor);
    DiscountMap discounts;
    try {
      discounts = evaluate_parametrization(arena, param, t);
    } catch (const ValidationError&) {
      continue;  // t below the certified interval and outside [0,1)
    }
    DiscountedSolveResult numeric;
    try {
      numeric = solve_discounted(arena, discounts, 1e-9, 200000);
    } catch (const ConvergenceError&) {
      break;  // discounts too close to 1 for the numeric path
    }
    if (candidate && numeric.profile == *candidate) {
      ++stable;
    } else {
      candidate = numeric.profile;
      stable = 1;
    }
  }

  if (candidate && stable >= 3) {
    // Certify just the stabilized candidate, no full enumeration.
    ProfileSpace space(arena);
    space.total_checked(budget);
    std::vector<RationalFunction> opt =
        eval_profile_discounted_symbolic(arena, param, *candidate);
    const std::vector<int> choices = profile_choices(arena, *candidate);
    std::size_t i = 0, j = 0;
    for (std::size_t s = 0; s < arena.size(); ++s) {
      const ArenaState& st = arena.state(s);
      auto& index = st.controller == Controller::Max ? i : j;
      index = index * st.actions.size() + static_cast<std::size_t>(choices[s]);
    }
    std::vector<DeviationCheck> certificate;
    bool ok = true;
    for (std::size_t d = 0; ok && d < space.max_count(); ++d) {
      if (d == i) continue;
      std::vector<RationalFunction> dev =
          eval_profile_discounted_symbolic(arena, param, space.combine(d, j));
      for (std::size_t s = 0; s < arena.size(); ++s) {
        SignAtOneMinus cmp = sign_near_one(opt[s] - dev[s]);
        certificate.push_back(
            {arena.state(s).id, "max", space.combine(d, j), cmp.sign, cmp.vanishing_order});
        if (cmp.sign < 0) ok = false;
      }
    }
    for (std::size_t d = 0; ok && d < space.min_count(); ++d) {
      if (d == j) continue;
      std::vector<RationalFunction> dev =
          eval_profile_discounted_symbolic(arena, param, space.combine(i, d));
      for (std::size_t s = 0; s < arena.size(); ++s) {
        SignAtOneMinus cmp = sign_near_one(dev[s] - opt[s]);
        certificate.push_back(
            {arena.state(s).id, "min", space.combine(i, d), cmp.sign, cmp.vanishing_order});
        if (cmp.sign < 0) ok = false;
      }
    }
    if (ok) {
      BlackwellResult result;
      result.profile = *candidate;
      for (std::size_t s = 0; s < arena.size(); ++s)
        result.value_functions[arena.state(s).id] = opt[s];
      result.certificate = std::move(certificate);
      result.mode_used = "hybrid";
      for (const auto& [state, label] : result.profile.max_choice)
        result.optimal_max_choices[state].insert(label);
      for (const auto& [state, label] : result.profile.min_choice)
        result.optimal_min_choices[state].insert(label);
      return result;
    }
  }

  BlackwellResult result = blackwell_search_exact(arena, param, budget);
  result.mode_used = "hybrid-fallback-exact";
  return result;
}

LimitCheckReport limit_check(const Arena& arena, const DiscountParametrization& param,
                             const std::optional<WeightedPrioritySystem>& system_override,
                             int kmax, std::size_t budget, std::size_t lemma2_sample) {
  validate_parametrization(arena, param);
  LimitCheckReport report;
  report.system = system_override ? *system_override : derive_system(param);
  validate_system(arena, report.system);

  report.pmp = solve_pmp_bruteforce(arena, report.system, budget);
  report.blackwell = blackwell_search_exact(arena, param, budget);

  std::vector<Rational> blackwell_pmp =
      eval_profile_pmp(arena, report.blackwell.profile, report.system);
  bool all_ok = true;
  for (std::size_t s = 0; s < arena.size(); ++s) {
    LimitCheckState state;
    state.id = arena.state(s).id;
    state.pmp_value = report.pmp.values[s];
    state.blackwell_pmp_value = blackwell_pmp[s];
    state.equal = state.pmp_value == state.blackwell_pmp_value;
    all_ok = all_ok && state.equal;
    report.states.push_back(std::move(state));
  }

  {
    // Saddle membership of the Blackwell profile in the mean-payoff game.
    const auto& bw = report.blackwell.profile;
    bool member = true;
    for (const auto& [state, label] : bw.max_choice) {
      auto it = report.pmp.optimal_max_choices.find(state);
      member = member && it != report.pmp.optimal_max_choices.end() && it->second.count(label) > 0;
    }
    for (const auto& [state, label] : bw.min_choice) {
      auto it = report.pmp.optimal_min_choices.find(state);
      member = member && it != report.pmp.optimal_min_choices.end() && it->second.count(label) > 0;
    }
    report.blackwell_profile_is_pmp_saddle = member;
  }

  // Lemma-2 evidence: profile-wise discounted values tend to the profile's
  // own priority mean-payoff expectation.
  ProfileSpace space(arena);
  const std::size_t total = space.total_checked(budget);
  const std::size_t stride = total <= lemma2_sample ? 1 : (total + lemma2_sample - 1) / lemma2_sample;
  for (std::size_t p = 0; p < total; p += stride) {
    StrategyProfile profile = space.profile_at(p);
    std::vector<RationalFunction> symbolic =
        eval_profile_discounted_symbolic(arena, param, profile);
    std::vector<Rational> pmp = eval_profile_pmp(arena, profile, report.system);
    Lemma2Check check;
    check.profile = profile;
    check.ok = true;
    for (std::size_t s = 0; s < arena.size(); ++s) {
      SignAtOneMinus diff = sign_near_one(symbolic[s] - RationalFunction(pmp[s]));
      check.ok = check.ok && (diff.sign == 0 || diff.vanishing_order >= 1);
    }
    all_ok = all_ok && check.ok;
    report.lemma2.push_back(std::move(check));
  }

  const Rational t_floor = Rational(1) - param.epsilon;
  for (int k = 4; k <= kmax; ++k) {
    NumericRow row;
    row.k = k;
    row.t = max(Rational(1) - pow2_neg(k), t_floor);
    double dev = 0.0;
    for (std::size_t s = 0; s < arena.size(); ++s) {
      const RationalFunction& vf = report.blackwell.value_functions.at(arena.state(s).id);
      Rational exact = vf.eval_at(row.t) - report.pmp.values[s];
      dev = std::max(dev, std::abs(exact.to_double()));
    }
    row.max_deviation = dev;
    report.numeric.push_back(row);
  }

  report.all_equal = all_ok;
  return report;
}

}  // namespace pmpg
