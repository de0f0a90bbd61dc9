#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pmpg/arena.hpp"
#include "pmpg/discounted.hpp"

namespace pmpg {

// xoshiro256** (Blackman/Vigna), state seeded through splitmix64. Fixed
// algorithm and constants so runs are bit-identical across platforms.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);
  std::uint64_t next();
  // Advances 2^128 steps; stream i of a seed is i jumps from the seed state.
  void jump();
  static Xoshiro256 stream(std::uint64_t seed, unsigned index);

 private:
  std::array<std::uint64_t, 4> s_;
};

enum class SimEstimator { DiscountedStopping, PmpTruncated };

struct SimConfig {
  std::uint64_t seed = 0;
  std::size_t samples = 1;
  std::size_t horizon = 1;
  SimEstimator estimator = SimEstimator::DiscountedStopping;
};

struct SimEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples_used = 0;
  double truncated_fraction = 0.0;
};

// One sampled play of at most `horizon` states: the controller's profile
// picks the action, the successor is drawn by inverse CDF over the action's
// successor list in document order (uniform 64-bit draw read as r/2^64).
Play sample_play(const Arena& arena, const StrategyProfile& profile, int initial,
                 std::size_t horizon, Xoshiro256& rng);

// Stopping-game estimator: every visit to s stops with probability
// 1 - lambda(s) and pays r(s). Plays hitting the horizon count as truncated
// and contribute their partial discounted sum.
SimEstimate estimate_discounted(const Arena& arena, const DiscountMap& discounts,
                                const StrategyProfile& profile, int initial,
                                const SimConfig& config);

// Truncated-play priority mean-payoff estimator: the play priority is read
// off the suffix half [horizon/2, horizon) and the filtered weighted average
// is taken over the same suffix. Consistent but not unbiased; exact values
// come from eval_profile_pmp. Every play is truncated by construction, so
// truncated_fraction is always 1.
SimEstimate estimate_pmp(const Arena& arena, const WeightedPrioritySystem& system,
                         const StrategyProfile& profile, int initial, const SimConfig& config);

}  // namespace pmpg
