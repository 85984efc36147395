#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bandit_clt/errors.hpp"

namespace bandit_clt {

enum class Algorithm { TS, UCB };

constexpr std::string_view to_string(Algorithm a) { return a == Algorithm::TS ? "ts" : "ucb"; }

inline Algorithm parse_algorithm(std::string_view name) {
  if (name == "ts" || name == "TS") return Algorithm::TS;
  if (name == "ucb" || name == "UCB") return Algorithm::UCB;
  throw Error(ErrorKind::InvalidConfig, "unknown algorithm '" + std::string(name) + "'");
}

/// Gaussian-tuned policy. `design_std` is the reward std the algorithm assumes;
/// TS uses a N(prior_mean, design_std^2) prior on every arm mean.
struct PolicyConfig {
  Algorithm algorithm = Algorithm::UCB;
  double design_std = 1.0;
  double prior_mean = 0.0;

  static PolicyConfig ts(double design_std = 1.0) { return {Algorithm::TS, design_std, 0.0}; }
  static PolicyConfig ucb(double design_std = 1.0) { return {Algorithm::UCB, design_std, 0.0}; }

  double prior_std() const noexcept { return design_std; }
  double design_variance() const noexcept { return design_std * design_std; }

  void validate() const {
    if (!(design_std > 0.0) || !std::isfinite(design_std)) {
      throw Error(ErrorKind::InvalidConfig, "design_std must be positive and finite");
    }
    if (prior_mean != 0.0) throw Error(ErrorKind::InvalidConfig, "prior mean is fixed at 0");
  }
};

struct PolicyState {
  std::uint64_t t = 0;
  std::vector<std::uint64_t> counts;
  std::vector<double> sums;

  PolicyState() = default;
  explicit PolicyState(std::size_t arms) : counts(arms, 0), sums(arms, 0.0) {}

  std::size_t arms() const noexcept { return counts.size(); }

  void record(std::size_t arm, double reward) noexcept {
    ++t;
    ++counts[arm];
    sums[arm] += reward;
  }
};

/// Posterior sample for one arm: shrunk mean sum/(1+n) plus sigma*z/sqrt(1+n).
inline double ts_sample(double sum, std::uint64_t n, double sigma, double z, double prior_mean = 0.0) {
  const double m = 1.0 + static_cast<double>(n);
  return (prior_mean + sum) / m + sigma * z / std::sqrt(m);
}

/// Thompson sampling: argmax of posterior samples driven by the supplied
/// standard normal draws (one per arm). Ties go to the lowest index.
inline std::size_t ts_select(const PolicyState& state, const PolicyConfig& config,
                             std::span<const double> noise) {
  if (noise.size() != state.arms()) {
    throw Error(ErrorKind::InvalidConfig, "ts_select needs one normal draw per arm");
  }
  std::size_t best = 0;
  double best_value = -HUGE_VAL;
  for (std::size_t k = 0; k < state.arms(); ++k) {
    const double v =
        ts_sample(state.sums[k], state.counts[k], config.design_std, noise[k], config.prior_mean);
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  return best;
}

// Shared by the policy and by trajectory re-checks so both see identical rounding.
inline double ucb_value(double mean_hat, std::uint64_t n, double log_t_next, double sigma) noexcept {
  return mean_hat + sigma * std::sqrt(2.0 * log_t_next / static_cast<double>(n));
}

/// mean_hat + sigma * sqrt(2 ln(t_next) / n)
inline double ucb_index(double mean_hat, std::uint64_t n, std::uint64_t t_next, double sigma) {
  if (n == 0) throw Error(ErrorKind::ZeroCount, "UCB index needs at least one play");
  if (t_next == 0) throw Error(ErrorKind::InvalidConfig, "t_next must be >= 1");
  return ucb_value(mean_hat, n, std::log(static_cast<double>(t_next)), sigma);
}

/// UCB over un-shrunk sample means at time t+1. Ties go to the lowest index.
inline std::size_t ucb_select(const PolicyState& state, const PolicyConfig& config) {
  const double log_t_next = std::log(static_cast<double>(state.t + 1));
  std::size_t best = 0;
  double best_value = -HUGE_VAL;
  for (std::size_t k = 0; k < state.arms(); ++k) {
    const std::uint64_t n = state.counts[k];
    if (n == 0) throw Error(ErrorKind::NotInitialized, "arm " + std::to_string(k) + " never played");
    const double v = ucb_value(state.sums[k] / static_cast<double>(n), n, log_t_next, config.design_std);
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  return best;
}

}  // namespace bandit_clt
