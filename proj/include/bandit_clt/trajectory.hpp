#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bandit_clt/env.hpp"
#include "bandit_clt/errors.hpp"
#include "bandit_clt/policy.hpp"
#include "bandit_clt/rng.hpp"

namespace bandit_clt {

/// Identifies the random streams of one replication.
struct StreamSeed {
  std::uint64_t master = 0;
  std::uint64_t replication = 0;

  CounterStream stream(std::size_t arm, StreamPurpose purpose) const noexcept {
    return CounterStream(master, replication, arm, purpose);
  }

  friend bool operator==(const StreamSeed&, const StreamSeed&) = default;
};

struct Checkpoint {
  std::uint64_t t = 0;
  std::vector<std::uint64_t> counts;
  double regret = 0.0;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

struct TrajectoryOptions {
  bool record_play_times = false;
  bool record_rewards = false;
  std::vector<std::uint64_t> checkpoints;  // times in [1, horizon]; the horizon is always added
};

/// Outcome of one simulated run. Immutable once returned.
struct TrajectoryRecord {
  std::uint64_t horizon = 0;
  PolicyConfig config;
  StreamSeed seed;
  std::vector<std::uint64_t> final_counts;
  double final_regret = 0.0;
  std::vector<Checkpoint> checkpoints;
  // Empty unless requested. play_times[k][j-1] is the time of the j-th play of arm k;
  // rewards[k][j-1] is the reward it produced.
  std::vector<std::vector<std::uint64_t>> play_times;
  std::vector<std::vector<double>> rewards;

  bool has_play_times() const noexcept { return !play_times.empty(); }
  bool has_rewards() const noexcept { return !rewards.empty(); }

  const Checkpoint* checkpoint_at(std::uint64_t t) const noexcept {
    auto it = std::lower_bound(checkpoints.begin(), checkpoints.end(), t,
                               [](const Checkpoint& c, std::uint64_t v) { return c.t < v; });
    return (it != checkpoints.end() && it->t == t) ? &*it : nullptr;
  }

  friend bool operator==(const TrajectoryRecord& a, const TrajectoryRecord& b) {
    return a.horizon == b.horizon && a.config.algorithm == b.config.algorithm &&
           a.config.design_std == b.config.design_std && a.seed == b.seed &&
           a.final_counts == b.final_counts && a.final_regret == b.final_regret &&
           a.checkpoints == b.checkpoints && a.play_times == b.play_times && a.rewards == b.rewards;
  }
};

namespace detail {

inline std::vector<std::uint64_t> normalized_checkpoints(std::vector<std::uint64_t> cps,
                                                         std::uint64_t horizon) {
  cps.push_back(horizon);
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  if (!cps.empty() && cps.front() == 0) {
    throw Error(ErrorKind::InvalidConfig, "checkpoint times start at 1");
  }
  if (cps.back() > horizon) throw Error(ErrorKind::InvalidConfig, "checkpoint beyond horizon");
  return cps;
}

}  // namespace detail

/// Simulates t = 1..horizon. UCB first plays every arm once in index order.
/// The j-th reward of arm k is the j-th draw of stream (seed, k, Reward), and the
/// TS noise for arm k at every step comes from stream (seed, k, TsNoise).
inline TrajectoryRecord run_trajectory(const BanditEnv& env, const PolicyConfig& config,
                                       std::uint64_t horizon, StreamSeed seed,
                                       const TrajectoryOptions& options = {}) {
  config.validate();
  const std::size_t arms = env.size();
  if (arms < 2) throw Error(ErrorKind::EmptyEnv, "a bandit needs at least 2 arms");
  if (horizon == 0) throw Error(ErrorKind::InvalidConfig, "horizon must be positive");
  if (config.algorithm == Algorithm::UCB && horizon < arms) {
    throw Error(ErrorKind::HorizonTooShort, "UCB needs horizon >= number of arms");
  }

  TrajectoryRecord rec;
  rec.horizon = horizon;
  rec.config = config;
  rec.seed = seed;
  const auto cps = detail::normalized_checkpoints(options.checkpoints, horizon);
  rec.checkpoints.reserve(cps.size());
  if (options.record_play_times) rec.play_times.resize(arms);
  if (options.record_rewards) rec.rewards.resize(arms);

  std::vector<CounterStream> reward_streams;
  std::vector<CounterStream> noise_streams;
  reward_streams.reserve(arms);
  for (std::size_t k = 0; k < arms; ++k) reward_streams.push_back(seed.stream(k, StreamPurpose::Reward));
  if (config.algorithm == Algorithm::TS) {
    noise_streams.reserve(arms);
    for (std::size_t k = 0; k < arms; ++k) noise_streams.push_back(seed.stream(k, StreamPurpose::TsNoise));
  }

  PolicyState state(arms);
  std::vector<double> noise(arms);
  std::size_t next_cp = 0;

  for (std::uint64_t t = 1; t <= horizon; ++t) {
    std::size_t arm = 0;
    if (config.algorithm == Algorithm::UCB) {
      arm = (t <= arms) ? static_cast<std::size_t>(t - 1) : ucb_select(state, config);
    } else {
      for (std::size_t k = 0; k < arms; ++k) noise[k] = noise_streams[k].normal();
      arm = ts_select(state, config, noise);
    }
    const double reward = env.arms[arm].sample(reward_streams[arm]);
    state.record(arm, reward);
    if (options.record_play_times) rec.play_times[arm].push_back(t);
    if (options.record_rewards) rec.rewards[arm].push_back(reward);
    if (next_cp < cps.size() && cps[next_cp] == t) {
      rec.checkpoints.push_back(
          {t, state.counts, env.regret(std::span<const std::uint64_t>(state.counts))});
      ++next_cp;
    }
  }
  rec.final_counts = state.counts;
  rec.final_regret = env.regret(std::span<const std::uint64_t>(rec.final_counts));
  return rec;
}

}  // namespace bandit_clt
