#include "pmpg/cli.hpp"

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "pmpg/blackwell.hpp"
#include "pmpg/sim.hpp"

namespace pmpg::cli {

namespace {

using nlohmann::json;

// 12 significant digits, re-read so the JSON number round-trips to the
// printed value.
double sig12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

json rational_vector_json(const Arena& arena, const std::vector<Rational>& values) {
  json out = json::object();
  for (std::size_t s = 0; s < arena.size(); ++s) out[arena.state(s).id] = values[s].str();
  return out;
}

json profile_json(const StrategyProfile& profile) {
  json jmax = json::object();
  json jmin = json::object();
  for (const auto& [state, label] : profile.max_choice) jmax[state] = label;
  for (const auto& [state, label] : profile.min_choice) jmin[state] = label;
  return json{{"max", std::move(jmax)}, {"min", std::move(jmin)}};
}

StrategyProfile profile_from_json(const json& doc) {
  StrategyProfile profile;
  if (!doc.is_object() || !doc.contains("max") || !doc.contains("min"))
    throw ValidationError("profile", "expected {\"max\":{state:label},\"min\":{state:label}}");
  for (const auto& [state, label] : doc["max"].items())
    profile.max_choice[state] = label.get<std::string>();
  for (const auto& [state, label] : doc["min"].items())
    profile.min_choice[state] = label.get<std::string>();
  return profile;
}

json choice_sets_json(const std::map<std::string, std::set<std::string>>& sets) {
  json out = json::object();
  for (const auto& [state, labels] : sets) out[state] = labels;
  return out;
}

// Discount source shared by the discounted-payoff commands: either an
// evaluation point --t for the file's parametrization, or --lambda-from-file
// reading each state's `discount` expression as a constant.
struct DiscountSource {
  std::string t_text;
  bool lambda_from_file = false;

  bool has_t() const { return !t_text.empty(); }

  DiscountMap resolve(const Arena& arena) const {
    if (has_t() && lambda_from_file)
      throw ValidationError("", "--t and --lambda-from-file are mutually exclusive");
    if (has_t()) {
      Rational t0 = Rational::parse(t_text);
      return evaluate_parametrization(arena, make_parametrization(arena), t0);
    }
    if (lambda_from_file) {
      DiscountMap discounts;
      for (const ArenaState& st : arena.states) {
        if (!st.discount || !st.discount->is_constant())
          throw ValidationError(st.id, "--lambda-from-file needs a constant discount per state");
        discounts.lambda[st.id] = st.discount->constant_value();
      }
      validate_discounts(arena, discounts);
      return discounts;
    }
    throw ValidationError("", "one of --t or --lambda-from-file is required");
  }
};

json deviation_check_json(const DeviationCheck& check) {
  return json{{"state", check.state},
              {"player", check.player},
              {"deviation", profile_json(check.deviating_profile)},
              {"sign", check.sign},
              {"vanishing_order", check.vanishing_order}};
}

json blackwell_json(const Arena& arena, const BlackwellResult& result) {
  json values = json::object();
  for (const ArenaState& st : arena.states)
    values[st.id] = result.value_functions.at(st.id).str();
  json certificate = json::array();
  for (const DeviationCheck& check : result.certificate)
    certificate.push_back(deviation_check_json(check));
  return json{{"profile", profile_json(result.profile)},
              {"value_functions", values},
              {"certificate", certificate},
              {"optimal_max_choices", choice_sets_json(result.optimal_max_choices)},
              {"optimal_min_choices", choice_sets_json(result.optimal_min_choices)},
              {"mode_used", result.mode_used}};
}

json limit_report_json(const LimitCheckReport& report) {
  json states = json::array();
  for (const LimitCheckState& st : report.states)
    states.push_back(json{{"id", st.id},
                          {"pmp_value", st.pmp_value.str()},
                          {"blackwell_pmp_value", st.blackwell_pmp_value.str()},
                          {"equal", st.equal}});
  json lemma2 = json::array();
  for (const Lemma2Check& check : report.lemma2)
    lemma2.push_back(json{{"profile", profile_json(check.profile)}, {"ok", check.ok}});
  json numeric = json::array();
  for (const NumericRow& row : report.numeric)
    numeric.push_back(json{{"k", row.k},
                           {"t", row.t.str()},
                           {"max_deviation", sig12(row.max_deviation)}});
  json system = json::object();
  for (const auto& [id, w] : report.system.weight)
    system[id] = json{{"weight", w.str()}, {"priority", report.system.priority.at(id)}};
  return json{{"derived_system", system},
              {"states", states},
              {"blackwell_profile", profile_json(report.blackwell.profile)},
              {"blackwell_profile_is_pmp_saddle", report.blackwell_profile_is_pmp_saddle},
              {"lemma2", lemma2},
              {"numeric", numeric},
              {"all_equal", report.all_equal}};
}

struct Options {
  std::string file;
  std::string t_text;
  bool lambda_from_file = false;
  double tolerance = 1e-9;
  std::size_t max_iter = 1000000;
  std::string profile_text;
  std::string payoff = "discounted";
  std::string mode = "exact";
  std::string estimator = "discounted-stopping";
  std::string initial;
  std::uint64_t seed = 0;
  std::size_t samples = 100000;
  std::size_t horizon = 10000;
  int kmax = 20;
  int k_start = 4;
  int k_end = 40;
  std::size_t budget = 1u << 20;
  bool pretty = false;
};

int initial_index(const Arena& arena, const std::string& id) {
  if (id.empty()) return 0;
  int index = arena.index_of(id);
  if (index < 0) throw ValidationError(id, "unknown initial state");
  return index;
}

CommandOutcome dispatch(const std::string& command, const Options& opt) {
  CommandOutcome outcome;
  json& payload = outcome.payload;

  if (command == "validate") {
    Arena arena = load_arena_file(opt.file);
    ProfileSpace space(arena);
    json ids = json::array();
    for (const ArenaState& st : arena.states) ids.push_back(st.id);
    payload = json{{"valid", true},
                   {"states", arena.size()},
                   {"state_ids", ids},
                   {"profiles", space.total().fits_slong_p()
                                    ? json(space.total().get_si())
                                    : json(space.total().get_str())}};
    return outcome;
  }

  if (command == "solve-discounted") {
    Arena arena = load_arena_file(opt.file);
    DiscountSource source{opt.t_text, opt.lambda_from_file};
    DiscountMap discounts = source.resolve(arena);
    DiscountedSolveResult result = solve_discounted(arena, discounts, opt.tolerance, opt.max_iter);
    json values = json::object();
    for (const auto& [id, v] : result.values) values[id] = sig12(v);
    json lambdas = json::object();
    for (const auto& [id, v] : discounts.lambda) lambdas[id] = v.str();
    payload = json{{"values", values},
                   {"profile", profile_json(result.profile)},
                   {"residual", sig12(result.residual)},
                   {"iterations", result.iterations},
                   {"discounts", lambdas}};
    return outcome;
  }

  if (command == "eval-profile") {
    Arena arena = load_arena_file(opt.file);
    StrategyProfile profile = profile_from_json(json::parse(opt.profile_text, nullptr, true));
    if (opt.payoff == "pmp") {
      auto values = eval_profile_pmp(arena, profile, weighted_priority_system(arena));
      payload = json{{"payoff", "pmp"}, {"values", rational_vector_json(arena, values)}};
    } else if (opt.payoff == "discounted") {
      if (!opt.t_text.empty() || opt.lambda_from_file) {
        DiscountSource source{opt.t_text, opt.lambda_from_file};
        auto values = eval_profile_discounted(arena, source.resolve(arena), profile);
        payload = json{{"payoff", "discounted"}, {"values", rational_vector_json(arena, values)}};
      } else {
        auto values =
            eval_profile_discounted_symbolic(arena, make_parametrization(arena), profile);
        json out = json::object();
        for (std::size_t s = 0; s < arena.size(); ++s)
          out[arena.state(s).id] = values[s].str();
        payload = json{{"payoff", "discounted"}, {"values", out}};
      }
    } else {
      throw ValidationError("--payoff", "expected discounted or pmp");
    }
    return outcome;
  }

  if (command == "solve-pmp") {
    Arena arena = load_arena_file(opt.file);
    PmpSolveResult result =
        solve_pmp_bruteforce(arena, weighted_priority_system(arena), opt.budget);
    payload = json{{"values", rational_vector_json(arena, result.values)},
                   {"profile", profile_json(result.profile)},
                   {"optimal_max_choices", choice_sets_json(result.optimal_max_choices)},
                   {"optimal_min_choices", choice_sets_json(result.optimal_min_choices)},
                   {"saddle_profiles", result.saddle_count}};
    return outcome;
  }

  if (command == "blackwell") {
    Arena arena = load_arena_file(opt.file);
    DiscountParametrization param = make_parametrization(arena);
    BlackwellResult result =
        opt.mode == "hybrid"
            ? blackwell_search_hybrid(arena, param, opt.k_start, opt.k_end, opt.budget)
            : blackwell_search_exact(arena, param, opt.budget);
    payload = blackwell_json(arena, result);
    payload["epsilon"] = param.epsilon.str();
    for (const std::string& note : param.certification_notes)
      outcome.diagnostics += note + "\n";
    return outcome;
  }

  if (command == "derive-priorities") {
    Arena arena = load_arena_file(opt.file);
    DiscountParametrization param = make_parametrization(arena);
    WeightedPrioritySystem system = derive_system(param);
    json out = json::object();
    for (const ArenaState& st : arena.states)
      out[st.id] = json{{"weight", system.weight.at(st.id).str()},
                        {"priority", system.priority.at(st.id)}};
    payload = json{{"derived_system", out}, {"epsilon", param.epsilon.str()}};
    return outcome;
  }

  if (command == "star-transform") {
    Arena arena = load_arena_file(opt.file);
    DiscountSource source{opt.t_text, opt.lambda_from_file};
    Arena star = star_transform(arena, source.resolve(arena));
    payload = serialize_arena(star);
    return outcome;
  }

  if (command == "simulate") {
    Arena arena = load_arena_file(opt.file);
    StrategyProfile profile = profile_from_json(json::parse(opt.profile_text, nullptr, true));
    SimConfig config;
    config.seed = opt.seed;
    config.samples = opt.samples;
    config.horizon = opt.horizon;
    int initial = initial_index(arena, opt.initial);
    SimEstimate estimate;
    if (opt.estimator == "discounted-stopping") {
      DiscountSource source{opt.t_text, opt.lambda_from_file};
      estimate = estimate_discounted(arena, source.resolve(arena), profile, initial, config);
    } else if (opt.estimator == "pmp-truncated") {
      estimate = estimate_pmp(arena, weighted_priority_system(arena), profile, initial, config);
      outcome.diagnostics +=
          "pmp-truncated reads the play priority off a finite suffix; it is a "
          "consistent cross-check, not an unbiased estimator\n";
    } else {
      throw ValidationError("--estimator", "expected discounted-stopping or pmp-truncated");
    }
    payload = json{{"mean", sig12(estimate.mean)},
                   {"std_error", sig12(estimate.std_error)},
                   {"samples_used", estimate.samples_used},
                   {"truncated_fraction", sig12(estimate.truncated_fraction)}};
    return outcome;
  }

  if (command == "limit-check") {
    Arena arena = load_arena_file(opt.file);
    DiscountParametrization param = make_parametrization(arena);
    LimitCheckReport report = limit_check(arena, param, std::nullopt, opt.kmax, opt.budget);
    payload = limit_report_json(report);
    payload["epsilon"] = param.epsilon.str();
    if (!report.all_equal) {
      outcome.exit_code = 1;
      outcome.diagnostics += "limit transfer check FAILED\n";
    }
    return outcome;
  }

  throw ValidationError(command, "unknown command");
}

}  // namespace

CommandOutcome run(const std::vector<std::string>& args) {
  CLI::App app{"Solver suite for perfect-information stochastic games: multi-discounted and "
               "priority mean-payoff values, Blackwell-optimal strategies, limit checks"};
  app.require_subcommand(1);
  Options opt;

  auto add_file = [&opt](CLI::App* cmd) {
    cmd->add_option("file", opt.file, "arena document (JSON)")->required();
  };
  auto add_discount_flags = [&opt](CLI::App* cmd) {
    cmd->add_option("--t", opt.t_text, "evaluation point for the discount parametrization");
    cmd->add_flag("--lambda-from-file", opt.lambda_from_file,
                  "read constant discounts from the per-state discount field");
  };

  CLI::App* validate = app.add_subcommand("validate", "check an arena document");
  add_file(validate);

  CLI::App* solve_disc = app.add_subcommand("solve-discounted", "Shapley value iteration");
  add_file(solve_disc);
  add_discount_flags(solve_disc);
  solve_disc->add_option("--tolerance", opt.tolerance, "true-error bound on values");
  solve_disc->add_option("--max-iter", opt.max_iter, "iteration budget");

  CLI::App* eval = app.add_subcommand("eval-profile", "exact value of a fixed profile");
  add_file(eval);
  eval->add_option("--profile", opt.profile_text, "profile as JSON")->required();
  eval->add_option("--payoff", opt.payoff, "discounted | pmp");
  add_discount_flags(eval);

  CLI::App* solve_pmp = app.add_subcommand("solve-pmp", "priority mean-payoff game, brute force");
  add_file(solve_pmp);
  solve_pmp->add_option("--budget", opt.budget, "profile enumeration budget");

  CLI::App* blackwell = app.add_subcommand("blackwell", "Blackwell-optimal profile search");
  add_file(blackwell);
  blackwell->add_option("--mode", opt.mode, "exact | hybrid");
  blackwell->add_option("--k-start", opt.k_start, "hybrid: first sample exponent");
  blackwell->add_option("--k-end", opt.k_end, "hybrid: last sample exponent");
  blackwell->add_option("--budget", opt.budget, "profile enumeration budget");

  CLI::App* derive = app.add_subcommand("derive-priorities", "weighted priority system from the "
                                                             "discount parametrization");
  add_file(derive);

  CLI::App* star = app.add_subcommand("star-transform", "stopping-game arena");
  add_file(star);
  add_discount_flags(star);

  CLI::App* simulate = app.add_subcommand("simulate", "seeded Monte-Carlo estimate");
  add_file(simulate);
  simulate->add_option("--profile", opt.profile_text, "profile as JSON")->required();
  simulate->add_option("--estimator", opt.estimator, "discounted-stopping | pmp-truncated");
  simulate->add_option("--seed", opt.seed, "rng seed");
  simulate->add_option("--samples", opt.samples, "sample count");
  simulate->add_option("--horizon", opt.horizon, "max steps per play");
  simulate->add_option("--initial", opt.initial, "initial state id (default: first)");
  add_discount_flags(simulate);

  CLI::App* limit = app.add_subcommand("limit-check", "machine check of the limit transfer");
  add_file(limit);
  limit->add_option("--kmax", opt.kmax, "largest sample exponent");
  limit->add_option("--budget", opt.budget, "profile enumeration budget");

  app.add_flag("--pretty", opt.pretty, "indent the JSON payload");
  for (CLI::App* sub : {validate, solve_disc, eval, solve_pmp, blackwell, derive, star, simulate,
                        limit})
    sub->add_flag("--pretty", opt.pretty, "indent the JSON payload");

  CommandOutcome outcome;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    const std::string command = app.get_subcommands().front()->get_name();
    outcome = dispatch(command, opt);
  } catch (const CLI::CallForHelp& e) {
    outcome.exit_code = 0;
    outcome.diagnostics = app.help();
    outcome.payload = json{{"help", true}};
  } catch (const CLI::ParseError& e) {
    outcome.exit_code = 2;
    outcome.payload = json{{"error", {{"kind", "usage"}, {"message", e.what()}}}};
  } catch (const nlohmann::json::parse_error& e) {
    outcome.exit_code = 2;
    outcome.payload = json{{"error", {{"kind", "input"}, {"message", e.what()}}}};
  } catch (const ValidationError& e) {
    outcome.exit_code = 2;
    outcome.payload =
        json{{"error", {{"kind", "input"}, {"location", e.location}, {"message", e.message}}}};
  } catch (const BudgetError& e) {
    outcome.exit_code = 3;
    outcome.payload = json{{"error", {{"kind", "budget"}, {"message", e.what()}}}};
  } catch (const ConvergenceError& e) {
    outcome.exit_code = 3;
    outcome.payload = json{{"error", {{"kind", "convergence"}, {"message", e.what()}}}};
  } catch (const InvariantViolation& e) {
    outcome.exit_code = 1;
    outcome.payload = json{{"error", {{"kind", "invariant"}, {"message", e.what()}}}};
  } catch (const std::invalid_argument& e) {
    outcome.exit_code = 2;
    outcome.payload = json{{"error", {{"kind", "input"}, {"message", e.what()}}}};
  } catch (const std::exception& e) {
    outcome.exit_code = 1;
    outcome.payload = json{{"error", {{"kind", "internal"}, {"message", e.what()}}}};
  }
  outcome.payload["exit_code"] = outcome.exit_code;
  return outcome;
}

int main_entry(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  bool pretty = false;
  for (const std::string& arg : args) pretty = pretty || arg == "--pretty";
  CommandOutcome outcome = run(args);
  std::cout << outcome.payload.dump(pretty ? 2 : -1) << "\n";
  if (!outcome.diagnostics.empty()) std::cerr << outcome.diagnostics;
  return outcome.exit_code;
}

}  // namespace pmpg::cli
