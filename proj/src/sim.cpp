#include "pmpg/sim.hpp"

#include <cmath>

#include "pmpg/parallel.hpp"
#include "pmpg/priority_mp.hpp"

namespace pmpg {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& word : s_) word = splitmix64(x);
}

std::uint64_t Xoshiro256::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

void Xoshiro256::jump() {
  static constexpr std::uint64_t kJump[] = {0x180EC6D33CFD0ABAull, 0xD5A61266F0C9392Cull,
                                            0xA9582618E03FC9AAull, 0x39ABDC4529B1661Cull};
  std::array<std::uint64_t, 4> acc{0, 0, 0, 0};
  for (std::uint64_t word : kJump) {
    for (int b = 0; b < 64; ++b) {
      if (word & (1ull << b))
        for (std::size_t i = 0; i < 4; ++i) acc[i] ^= s_[i];
      next();
    }
  }
  s_ = acc;
}

Xoshiro256 Xoshiro256::stream(std::uint64_t seed, unsigned index) {
  Xoshiro256 rng(seed);
  for (unsigned i = 0; i < index; ++i) rng.jump();
  return rng;
}

namespace {

using U128 = unsigned __int128;

U128 to_u128(const Integer& z) {
  // z is known to fit: every threshold is at most 2^64.
  U128 value = 0;
  Integer rest = z;
  Integer limb;
  int shift = 0;
  while (sgn(rest) > 0) {
    limb = rest & Integer(0xFFFFFFFF);
    value |= static_cast<U128>(limb.get_ui()) << shift;
    rest >>= 32;
    shift += 32;
  }
  return value;
}

// Threshold B with: (r/2^64 < p/q) iff r < B, for a 64-bit draw r.
U128 draw_threshold(const Rational& cum) {
  Integer k = cum.numerator() << 64;
  Integer b = (k + cum.denominator() - 1) / cum.denominator();  // ceil
  return to_u128(b);
}

// Precomputed per-action successor CDF thresholds and per-state stop
// thresholds, so the inner sampling loop needs no big-integer work.
struct Tables {
  std::vector<int> choice;                            // action index per state
  std::vector<std::vector<U128>> cdf;                 // per state, cumulative
  std::vector<std::vector<int>> target;               // per state, successor
  std::vector<U128> stop;                             // threshold for 1-lambda
  std::vector<double> reward, lambda, weight;
  std::vector<int> priority;

  Tables(const Arena& arena, const StrategyProfile& profile) {
    choice = profile_choices(arena, profile);
    const std::size_t n = arena.size();
    cdf.resize(n);
    target.resize(n);
    reward.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
      const ArenaAction& act = arena.state(s).actions[static_cast<std::size_t>(choice[s])];
      Rational cum(0);
      for (const SuccessorEntry& entry : act.to) {
        cum += entry.prob;
        cdf[s].push_back(draw_threshold(cum));
        target[s].push_back(entry.state_index);
      }
      reward[s] = arena.state(s).reward.to_double();
    }
  }

  int step(std::size_t s, Xoshiro256& rng) const {
    const U128 r = static_cast<U128>(rng.next());
    const auto& thresholds = cdf[s];
    for (std::size_t i = 0;; ++i) {
      if (r < thresholds[i]) return target[s][i];
      if (i + 1 == thresholds.size()) return target[s][i];  // unreachable: cum ends at 1
    }
  }
};

struct Welford {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  // Chan et al. pairwise merge; applied in fixed stream order.
  void merge(const Welford& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    double delta = other.mean - mean;
    std::size_t total = count + other.count;
    mean += delta * static_cast<double>(other.count) / static_cast<double>(total);
    m2 += other.m2 + delta * delta * static_cast<double>(count) *
                         static_cast<double>(other.count) / static_cast<double>(total);
    count = total;
  }
};

constexpr unsigned kStreams = 16;

// Fixed split of the sample budget over kStreams rng streams; the estimate is
// a function of the seed alone, regardless of thread count.
template <typename PlayFn>
SimEstimate run_streams(const SimConfig& config, const PlayFn& one_sample) {
  std::array<Welford, kStreams> stats;
  std::array<std::size_t, kStreams> truncated{};
  std::array<std::size_t, kStreams> quota{};
  for (unsigned i = 0; i < kStreams; ++i)
    quota[i] = config.samples / kStreams + (i < config.samples % kStreams ? 1 : 0);

  parallel_for(kStreams, [&](std::size_t stream) {
    Xoshiro256 rng = Xoshiro256::stream(config.seed, static_cast<unsigned>(stream));
    for (std::size_t k = 0; k < quota[stream]; ++k) {
      auto [value, was_truncated] = one_sample(rng);
      stats[stream].add(value);
      if (was_truncated) ++truncated[stream];
    }
  });

  Welford all;
  std::size_t truncated_total = 0;
  for (unsigned i = 0; i < kStreams; ++i) {
    all.merge(stats[i]);
    truncated_total += truncated[i];
  }
  SimEstimate estimate;
  estimate.samples_used = all.count;
  estimate.mean = all.mean;
  estimate.std_error =
      all.count > 1 ? std::sqrt(all.m2 / static_cast<double>(all.count - 1) /
                                static_cast<double>(all.count))
                    : 0.0;
  estimate.truncated_fraction =
      all.count > 0 ? static_cast<double>(truncated_total) / static_cast<double>(all.count) : 0.0;
  return estimate;
}

}  // namespace

Play sample_play(const Arena& arena, const StrategyProfile& profile, int initial,
                 std::size_t horizon, Xoshiro256& rng) {
  if (initial < 0 || static_cast<std::size_t>(initial) >= arena.size())
    throw std::invalid_argument("initial state index out of range");
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  Tables tables(arena, profile);
  Play play;
  int current = initial;
  play.states.push_back(current);
  while (play.states.size() < horizon) {
    play.actions.push_back(tables.choice[static_cast<std::size_t>(current)]);
    current = tables.step(static_cast<std::size_t>(current), rng);
    play.states.push_back(current);
  }
  return play;
}

SimEstimate estimate_discounted(const Arena& arena, const DiscountMap& discounts,
                                const StrategyProfile& profile, int initial,
                                const SimConfig& config) {
  if (initial < 0 || static_cast<std::size_t>(initial) >= arena.size())
    throw std::invalid_argument("initial state index out of range");
  const std::vector<Rational> lambda = discounts_by_index(arena, discounts);
  Tables tables(arena, profile);
  tables.stop.resize(arena.size());
  tables.lambda.resize(arena.size());
  for (std::size_t s = 0; s < arena.size(); ++s) {
    tables.stop[s] = draw_threshold(Rational(1) - lambda[s]);
    tables.lambda[s] = lambda[s].to_double();
  }

  auto one_sample = [&](Xoshiro256& rng) -> std::pair<double, bool> {
    std::size_t current = static_cast<std::size_t>(initial);
    double carried = 1.0;
    double partial = 0.0;
    for (std::size_t step = 0; step < config.horizon; ++step) {
      partial += carried * (1.0 - tables.lambda[current]) * tables.reward[current];
      if (static_cast<U128>(rng.next()) < tables.stop[current])
        return {tables.reward[current], false};
      carried *= tables.lambda[current];
      current = static_cast<std::size_t>(tables.step(current, rng));
    }
    return {partial, true};
  };
  return run_streams(config, one_sample);
}

SimEstimate estimate_pmp(const Arena& arena, const WeightedPrioritySystem& system,
                         const StrategyProfile& profile, int initial, const SimConfig& config) {
  if (initial < 0 || static_cast<std::size_t>(initial) >= arena.size())
    throw std::invalid_argument("initial state index out of range");
  validate_system(arena, system);
  if (config.horizon < 2) throw std::invalid_argument("pmp estimator needs horizon >= 2");
  Tables tables(arena, profile);
  tables.weight.resize(arena.size());
  tables.priority.resize(arena.size());
  for (std::size_t s = 0; s < arena.size(); ++s) {
    tables.weight[s] = system.weight.at(arena.state(s).id).to_double();
    tables.priority[s] = system.priority.at(arena.state(s).id);
  }
  const std::size_t suffix_start = config.horizon / 2;

  auto one_sample = [&](Xoshiro256& rng) -> std::pair<double, bool> {
    std::vector<std::size_t> suffix;
    suffix.reserve(config.horizon - suffix_start);
    std::size_t current = static_cast<std::size_t>(initial);
    for (std::size_t step = 0; step < config.horizon; ++step) {
      if (step >= suffix_start) suffix.push_back(current);
      if (step + 1 < config.horizon)
        current = static_cast<std::size_t>(tables.step(current, rng));
    }
    int alpha = tables.priority[suffix.front()];
    for (std::size_t s : suffix) alpha = std::min(alpha, tables.priority[s]);
    double num = 0.0, den = 0.0;
    for (std::size_t s : suffix) {
      if (tables.priority[s] != alpha) continue;
      num += tables.weight[s] * tables.reward[s];
      den += tables.weight[s];
    }
    return {num / den, true};
  };
  return run_streams(config, one_sample);
}

}  // namespace pmpg
