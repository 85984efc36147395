#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bandit_clt/arm.hpp"
#include "bandit_clt/errors.hpp"

namespace bandit_clt {

/// A stochastic K-armed bandit with a unique optimal arm.
struct BanditEnv {
  std::vector<ArmSpec> arms;
  std::size_t k_star = 0;
  std::vector<double> gaps;  // gaps[k] = mean(k_star) - mean(k); gaps[k_star] == 0

  std::size_t size() const noexcept { return arms.size(); }

  std::vector<std::size_t> suboptimal_arms() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < arms.size(); ++k) {
      if (k != k_star) out.push_back(k);
    }
    return out;
  }

  /// Pseudo-regret sum_k N_k * gap_k.
  template <class Count>
  double regret(std::span<const Count> counts) const {
    double r = 0.0;
    for (std::size_t k = 0; k < gaps.size(); ++k) r += static_cast<double>(counts[k]) * gaps[k];
    return r;
  }
};

inline BanditEnv env_new(std::vector<ArmSpec> arms) {
  if (arms.size() < 2) throw Error(ErrorKind::EmptyEnv, "a bandit needs at least 2 arms");
  std::size_t best = 0;
  for (std::size_t k = 1; k < arms.size(); ++k) {
    if (arms[k].mean > arms[best].mean) best = k;
  }
  for (std::size_t k = 0; k < arms.size(); ++k) {
    if (k != best && arms[k].mean == arms[best].mean) {
      throw Error(ErrorKind::DuplicateOptimum, "maximal mean attained by more than one arm");
    }
  }
  BanditEnv env;
  env.k_star = best;
  env.gaps.reserve(arms.size());
  for (const auto& arm : arms) env.gaps.push_back(arms[best].mean - arm.mean);
  env.arms = std::move(arms);
  return env;
}

/// Gaussian arms with means 1, 1 - gaps[0], 1 - gaps[1], ... and a common std.
inline BanditEnv gaussian_env(std::span<const double> gaps, double std = 1.0) {
  std::vector<ArmSpec> arms{ArmSpec::gaussian(1.0, std)};
  for (double g : gaps) arms.push_back(ArmSpec::gaussian(1.0 - g, std));
  return env_new(std::move(arms));
}

inline BanditEnv gaussian_env(std::initializer_list<double> gaps, double std = 1.0) {
  return gaussian_env(std::span<const double>(gaps.begin(), gaps.size()), std);
}

}  // namespace bandit_clt
