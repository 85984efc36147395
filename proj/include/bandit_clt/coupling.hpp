#pragma once

// Thompson-sampling play probabilities and their renewal approximations.
//
// For a two-armed TS run with sub-optimal arm s, the chance that s is played at
// t+1 given the history is
//
//   p(t) = E_Z[ 1 - Phi( sqrt(1+n_s) (mu*_hat - mu_s_hat + sigma Z / sqrt(1+n*)) / sigma ) ],
//
// where the hats are the shrunk TS means sum/(1+n). The approximations below
// replace p by functions of the play index j = n_s alone:
//
//   p_tilde(j)   = exp(-j gap^2 / 2)
//   p_tilde+(j)  = exp(-j (gap^2/2 + eps))
//   p_tilde-(j)  = min(1, 2 exp(-j (gap^2/2 - eps)))
//   p_hat(j)     = min(1, exp(-j d^2 / 2) / sqrt(pi j d^2)),  d = mu* - mu_s_hat(j)
//   p_hat+(j)    = p_hat(j) / 5
//
// and the asymptotic sandwiches p_tilde+ < p < p_tilde- and p_hat+ < p < p_hat
// are checked epoch by epoch on simulated trajectories.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "bandit_clt/env.hpp"
#include "bandit_clt/errors.hpp"
#include "bandit_clt/normal.hpp"
#include "bandit_clt/quadrature.hpp"
#include "bandit_clt/trajectory.hpp"

namespace bandit_clt {

/// Absolute accuracy of play_prob_exact against the exact Gaussian expectation.
inline constexpr double kPlayProbTolerance = 1e-8;

/// Conditional probability that TS prefers arm k over the optimal arm, by
/// 64-node Gauss-Hermite quadrature. The expectation is taken over the noise of
/// whichever posterior sample is narrower, so the integrand Phi(a + b z) has b <= 1;
/// over the wider one it turns into a near-step and the rule loses accuracy.
inline double play_prob_exact(double mu_hat_k, std::uint64_t n_k, double mu_hat_star,
                              std::uint64_t n_star, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidConfig, "sigma must be positive");
  const double root_k = std::sqrt(1.0 + static_cast<double>(n_k));
  const double root_star = std::sqrt(1.0 + static_cast<double>(n_star));
  const double diff = mu_hat_star - mu_hat_k;
  const auto& gh = gauss_hermite_64();
  double p;
  if (n_k < n_star) {
    // over Z*: P(theta_k > theta* | Z*) = 1 - Phi(sqrt(1+n_k) (diff + sigma Z*/sqrt(1+n*)) / sigma)
    p = gh.expect_standard_normal([&](double z) { return normal_sf(root_k * (diff + sigma * z / root_star) / sigma); });
  } else {
    // over Z_k: P(theta* < theta_k | Z_k) = Phi(sqrt(1+n*) (sigma Z_k/sqrt(1+n_k) - diff) / sigma)
    p = gh.expect_standard_normal([&](double z) { return normal_cdf(root_star * (sigma * z / root_k - diff) / sigma); });
  }
  return std::clamp(p, 0.0, 1.0);
}

inline double p_tilde(std::uint64_t j, double delta) {
  return std::exp(-static_cast<double>(j) * delta * delta / 2.0);
}

namespace detail {
inline void check_eps(double delta, double eps) {
  if (!(eps > 0.0) || !(eps < delta * delta / 2.0)) {
    throw Error(ErrorKind::EpsOutOfRange, "eps must lie in (0, delta^2/2)");
  }
}
}  // namespace detail

inline double p_tilde_plus(std::uint64_t j, double delta, double eps) {
  detail::check_eps(delta, eps);
  return std::exp(-static_cast<double>(j) * (delta * delta / 2.0 + eps));
}

inline double p_tilde_minus(std::uint64_t j, double delta, double eps) {
  detail::check_eps(delta, eps);
  return std::min(1.0, 2.0 * std::exp(-static_cast<double>(j) * (delta * delta / 2.0 - eps)));
}

inline double p_hat(std::uint64_t j, double mu_star, double mu_hat_k_j) {
  if (j == 0) throw Error(ErrorKind::DegenerateGap, "p_hat needs j >= 1");
  const double d = mu_star - mu_hat_k_j;
  if (d == 0.0) throw Error(ErrorKind::DegenerateGap, "mu_star equals the sample mean");
  const double x2 = static_cast<double>(j) * d * d;
  return std::min(1.0, std::exp(-0.5 * x2) / std::sqrt(std::numbers::pi * x2));
}

inline double p_hat_plus(std::uint64_t j, double mu_star, double mu_hat_k_j) {
  return p_hat(j, mu_star, mu_hat_k_j) / 5.0;
}

/// Smallest i >= 1 with next_uniform() < p. Same uniforms and p <= p' give
/// tau(p) >= tau(p'). `next_uniform` must return values in (0, 1).
template <std::invocable UniformSource>
std::uint64_t tau_first_passage(double p, UniformSource&& next_uniform) {
  if (!(p > 0.0)) throw Error(ErrorKind::ZeroProbability, "first passage with p = 0 never ends");
  if (!(p <= 1.0)) throw Error(ErrorKind::InvalidConfig, "probability above 1");
  for (std::uint64_t i = 1;; ++i) {
    if (next_uniform() < p) return i;
  }
}

/// Fixed-stream overload; throws if the stream ends before a success.
inline std::uint64_t tau_first_passage(double p, std::span<const double> uniforms) {
  std::size_t pos = 0;
  return tau_first_passage(p, [&]() {
    if (pos == uniforms.size()) {
      throw Error(ErrorKind::InvalidConfig, "uniform stream exhausted before first passage");
    }
    return uniforms[pos++];
  });
}

// ---------------------------------------------------------------------------
// Sandwich diagnostics

struct CouplingRow {
  std::uint64_t t = 0;  // completed steps; probabilities refer to the decision at t+1
  std::uint64_t n_sub = 0;
  std::uint64_t n_opt = 0;
  double mu_hat_sub = 0.0;
  double mu_hat_opt = 0.0;
  double p_exact = 0.0;
  double p_tilde = 0.0;
  double p_tilde_plus = 0.0;
  double p_tilde_minus = 0.0;
  double p_hat = NAN;
  double p_hat_plus = NAN;
  bool tilde_lower_ok = false;  // p_tilde+ < p_exact
  bool tilde_upper_ok = false;  // p_exact < p_tilde-
  bool hat_skipped = false;     // p_hat undefined (j == 0 or zero gap)
  bool hat_lower_ok = false;    // p_hat+ < p_exact
  bool hat_upper_ok = false;    // p_exact < p_hat
};

/// Violation tallies over a contiguous block of epochs.
struct CouplingTally {
  std::uint64_t epochs = 0;
  std::uint64_t tilde_violations = 0;
  std::uint64_t tilde_lower_violations = 0;
  std::uint64_t tilde_upper_violations = 0;
  std::uint64_t hat_epochs = 0;  // epochs where p_hat is defined
  std::uint64_t hat_violations = 0;
  std::uint64_t hat_lower_violations = 0;
  std::uint64_t hat_upper_violations = 0;

  void add(const CouplingRow& row) {
    ++epochs;
    tilde_lower_violations += !row.tilde_lower_ok;
    tilde_upper_violations += !row.tilde_upper_ok;
    tilde_violations += !(row.tilde_lower_ok && row.tilde_upper_ok);
    if (!row.hat_skipped) {
      ++hat_epochs;
      hat_lower_violations += !row.hat_lower_ok;
      hat_upper_violations += !row.hat_upper_ok;
      hat_violations += !(row.hat_lower_ok && row.hat_upper_ok);
    }
  }

  CouplingTally& operator+=(const CouplingTally& o) {
    epochs += o.epochs;
    tilde_violations += o.tilde_violations;
    tilde_lower_violations += o.tilde_lower_violations;
    tilde_upper_violations += o.tilde_upper_violations;
    hat_epochs += o.hat_epochs;
    hat_violations += o.hat_violations;
    hat_lower_violations += o.hat_lower_violations;
    hat_upper_violations += o.hat_upper_violations;
    return *this;
  }

  double tilde_fraction() const {
    return epochs ? static_cast<double>(tilde_violations) / static_cast<double>(epochs) : 0.0;
  }
  double hat_fraction() const {
    return hat_epochs ? static_cast<double>(hat_violations) / static_cast<double>(hat_epochs)
                         : 0.0;
  }
};

struct CouplingReport {
  std::size_t sub_arm = 1;
  std::size_t opt_arm = 0;
  double gap = 0.0;
  double sigma = 1.0;
  double eps = 0.0;
  std::uint64_t horizon = 0;
  StreamSeed seed;

  std::vector<CouplingRow> rows;      // only when requested
  std::vector<std::uint64_t> bin_starts;  // bins[i] covers t in [bin_starts[i], next start)
  std::vector<CouplingTally> bins;
  CouplingTally early;  // t + 1 <  horizon / 2
  CouplingTally late;   // t + 1 >= horizon / 2

  /// Tallies over all epochs with t >= burn_in, at bin resolution.
  CouplingTally after(std::uint64_t burn_in) const {
    CouplingTally out;
    for (std::size_t i = 0; i < bins.size(); ++i) {
      if (bin_starts[i] >= burn_in) out += bins[i];
    }
    return out;
  }
};

struct SandwichOptions {
  bool keep_rows = false;
  std::size_t bins = 20;
};

/// Replays a two-armed TS trajectory and evaluates, at every decision epoch,
/// the exact play probability of the sub-optimal arm and its approximations.
/// Gaps are measured in units of the design std.
inline CouplingReport sandwich_check(const TrajectoryRecord& traj, const BanditEnv& env, double sigma,
                                     double eps, const SandwichOptions& options = {}) {
  if (env.size() != 2) throw Error(ErrorKind::NotTwoArmed, "sandwich check needs two arms");
  if (traj.config.algorithm != Algorithm::TS) {
    throw Error(ErrorKind::InvalidConfig, "sandwich check applies to TS trajectories");
  }
  if (!traj.has_play_times() || !traj.has_rewards()) {
    throw Error(ErrorKind::MissingHistory, "trajectory lacks play times or rewards");
  }
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidConfig, "sigma must be positive");

  CouplingReport rep;
  rep.opt_arm = env.k_star;
  rep.sub_arm = 1 - env.k_star;
  rep.gap = env.gaps[rep.sub_arm];
  rep.sigma = sigma;
  rep.eps = eps;
  rep.horizon = traj.horizon;
  rep.seed = traj.seed;
  const double gap_std = rep.gap / sigma;
  detail::check_eps(gap_std, eps);
  const double mu_star_std = env.arms[rep.opt_arm].mean / sigma;

  const std::size_t nbins = std::max<std::size_t>(1, std::min<std::size_t>(options.bins, traj.horizon));
  rep.bins.resize(nbins);
  for (std::size_t b = 0; b < nbins; ++b) rep.bin_starts.push_back(b * traj.horizon / nbins);
  if (options.keep_rows) rep.rows.reserve(traj.horizon);

  // Rebuild the arm choices from the recorded play times.
  std::vector<std::uint8_t> chosen(traj.horizon + 1, 2);
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::uint64_t time : traj.play_times[k]) {
      if (time == 0 || time > traj.horizon) {
        throw Error(ErrorKind::InvalidConfig, "play time outside [1, horizon]");
      }
      chosen[time] = static_cast<std::uint8_t>(k);
    }
  }

  std::uint64_t n[2] = {0, 0};
  double sum[2] = {0.0, 0.0};
  std::size_t bin = 0;
  for (std::uint64_t t = 0; t < traj.horizon; ++t) {
    while (bin + 1 < nbins && rep.bin_starts[bin + 1] <= t) ++bin;
    const std::size_t s = rep.sub_arm;
    const std::size_t o = rep.opt_arm;
    CouplingRow row;
    row.t = t;
    row.n_sub = n[s];
    row.n_opt = n[o];
    row.mu_hat_sub = sum[s] / (1.0 + static_cast<double>(n[s]));
    row.mu_hat_opt = sum[o] / (1.0 + static_cast<double>(n[o]));
    row.p_exact = play_prob_exact(row.mu_hat_sub, n[s], row.mu_hat_opt, n[o], sigma);
    row.p_tilde = p_tilde(n[s], gap_std);
    row.p_tilde_plus = p_tilde_plus(n[s], gap_std, eps);
    row.p_tilde_minus = p_tilde_minus(n[s], gap_std, eps);
    row.tilde_lower_ok = row.p_tilde_plus < row.p_exact;
    row.tilde_upper_ok = row.p_exact < row.p_tilde_minus;
    const double mu_hat_std = row.mu_hat_sub / sigma;
    if (n[s] == 0 || mu_star_std == mu_hat_std) {
      row.hat_skipped = true;
    } else {
      row.p_hat = p_hat(n[s], mu_star_std, mu_hat_std);
      row.p_hat_plus = row.p_hat / 5.0;
      row.hat_lower_ok = row.p_hat_plus < row.p_exact;
      row.hat_upper_ok = row.p_exact < row.p_hat;
    }
    rep.bins[bin].add(row);
    (2 * (t + 1) < traj.horizon ? rep.early : rep.late).add(row);
    if (options.keep_rows) rep.rows.push_back(row);

    const std::uint8_t a = chosen[t + 1];
    if (a > 1) throw Error(ErrorKind::InvalidConfig, "play times do not cover every step");
    const std::uint64_t j = n[a];
    if (j >= traj.rewards[a].size()) throw Error(ErrorKind::MissingHistory, "reward history too short");
    sum[a] += traj.rewards[a][j];
    ++n[a];
  }
  return rep;
}

}  // namespace bandit_clt
