#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "bandit_clt/env.hpp"
#include "bandit_clt/errors.hpp"

namespace bandit_clt {

/// Closed-form limit predictions for a sigma-tuned TS or UCB policy.
///
/// Per sub-optimal arm k (entries for the optimal arm are zero):
///   slln slope      2 sigma^2 / gap_k^2
///   clt mean (T)    slope * ln T
///   clt std  (T)    (2 sigma sigma_k / gap_k^2) * sqrt(2 ln T)
/// Regret is centred at sum_k gap_k * mean_k with variance sum_k gap_k^2 std_k^2,
/// since the sub-optimal counts are asymptotically independent.
struct LimitPrediction {
  double design_std = 1.0;
  std::vector<double> per_arm_slln_slope;
  double regret_slln_slope = 0.0;

  // Filled by clt_params only.
  std::uint64_t horizon = 0;
  std::vector<double> per_arm_clt_mean;
  std::vector<double> per_arm_clt_std;
  double regret_clt_mean = 0.0;
  double regret_clt_std = 0.0;
  bool degenerate = false;  // ln T == 0

  // -sigma^2 / sigma0^2 when every arm has the same reward variance sigma0^2, else NaN.
  double tail_exponent = NAN;
};

inline double tail_exponent(double sigma, double sigma0) {
  if (!(sigma > 0.0) || !(sigma0 > 0.0)) {
    throw Error(ErrorKind::InvalidConfig, "tail exponent needs positive standard deviations");
  }
  return -(sigma * sigma) / (sigma0 * sigma0);
}

inline LimitPrediction slln_limit(const BanditEnv& env, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidConfig, "sigma must be positive");
  LimitPrediction out;
  out.design_std = sigma;
  out.per_arm_slln_slope.assign(env.size(), 0.0);
  const double s2 = sigma * sigma;
  for (std::size_t k : env.suboptimal_arms()) {
    const double gap = env.gaps[k];
    if (!(gap > 0.0)) throw Error(ErrorKind::ZeroGap, "sub-optimal arm with zero gap");
    out.per_arm_slln_slope[k] = 2.0 * s2 / (gap * gap);
    out.regret_slln_slope += 2.0 * s2 / gap;
  }

  const double v0 = env.arms.front().variance;
  bool common = v0 > 0.0;
  for (const auto& arm : env.arms) common = common && arm.variance == v0;
  if (common) out.tail_exponent = tail_exponent(sigma, std::sqrt(v0));
  return out;
}

inline LimitPrediction clt_params(const BanditEnv& env, double sigma, std::uint64_t horizon) {
  if (horizon == 0) throw Error(ErrorKind::InvalidConfig, "horizon must be positive");
  LimitPrediction out = slln_limit(env, sigma);
  out.horizon = horizon;
  const double log_t = std::log(static_cast<double>(horizon));
  out.degenerate = !(log_t > 0.0);
  out.per_arm_clt_mean.assign(env.size(), 0.0);
  out.per_arm_clt_std.assign(env.size(), 0.0);
  double regret_var = 0.0;
  for (std::size_t k : env.suboptimal_arms()) {
    const double gap = env.gaps[k];
    out.per_arm_clt_mean[k] = out.per_arm_slln_slope[k] * log_t;
    out.per_arm_clt_std[k] = 2.0 * sigma * env.arms[k].std_dev() / (gap * gap) * std::sqrt(2.0 * log_t);
    out.regret_clt_mean += gap * out.per_arm_clt_mean[k];
    regret_var += gap * gap * out.per_arm_clt_std[k] * out.per_arm_clt_std[k];
  }
  out.regret_clt_std = std::sqrt(regret_var);
  return out;
}

}  // namespace bandit_clt
