#pragma once

// Play-time recursion of two-armed UCB.
//
// With sub-optimal arm s and optimal arm o, UCB plays s again at the first
// t > T_s(j) where
//
//   sigma sqrt(2 ln t / j) > mu_o_hat(N_o(t-1)) - mu_s_hat(j) + sigma sqrt(2 ln t / N_o(t-1)),
//
// i.e. t > exp(S(t)) with S(t) = j/(2 sigma^2) (mu_o_hat - mu_s_hat + sigma sqrt(2 ln t / N_o(t-1)))^2.
// Evaluating S at t = T_s(j+1) gives the closed form
//
//   T_s(j+1) = 1 + floor( max(T_s(j), exp(S_s(j))) ).
//
// Both forms are checked per j: `first_passage_match` re-runs the index
// comparison at every t in (T_s(j), T_s(j+1)], `closed_form_match` tests the
// floor expression. The closed form only holds when exp(S) has not moved below
// T_s(j+1) - 1 during the last optimal-arm update.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "bandit_clt/env.hpp"
#include "bandit_clt/errors.hpp"
#include "bandit_clt/policy.hpp"
#include "bandit_clt/trajectory.hpp"

namespace bandit_clt {

struct UcbRecursionRow {
  std::uint64_t j = 0;
  std::uint64_t play_time = 0;       // T_s(j)
  std::uint64_t next_play_time = 0;  // recorded T_s(j+1)
  std::uint64_t n_opt = 0;           // N_o(T_s(j+1) - 1)
  double exponent = 0.0;             // S_s(j)
  double reconstructed = 0.0;        // 1 + floor(max(T_s(j), exp(S))), +inf on overflow
  bool closed_form_match = false;
  bool first_passage_match = false;
};

struct UcbRecursionCheck {
  std::size_t sub_arm = 1;
  std::size_t opt_arm = 0;
  double sigma = 1.0;
  std::uint64_t horizon = 0;
  StreamSeed seed;
  std::vector<UcbRecursionRow> rows;

  std::size_t closed_form_matches() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.closed_form_match; }));
  }
  std::size_t first_passage_matches() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.first_passage_match; }));
  }
  bool all_closed_form() const { return closed_form_matches() == rows.size(); }
  bool all_first_passage() const { return first_passage_matches() == rows.size(); }
};

namespace detail {

/// Whether the closed-form recursion reproduces `next` from `prev` and S, in log space.
inline bool closed_form_holds(std::uint64_t prev, std::uint64_t next, double exponent) {
  const double log_prev = std::log(static_cast<double>(prev));
  if (exponent <= log_prev) return next == prev + 1;  // max() picks T_s(j)
  // 1 + floor(e^S) == next  <=>  ln(next - 1) <= S < ln(next)
  if (next < 2) return false;
  return std::log(static_cast<double>(next - 1)) <= exponent &&
         exponent < std::log(static_cast<double>(next));
}

inline double reconstruct(std::uint64_t prev, double exponent) {
  if (exponent > std::log(std::numeric_limits<double>::max())) return HUGE_VAL;
  return 1.0 + std::floor(std::max(static_cast<double>(prev), std::exp(exponent)));
}

}  // namespace detail

inline UcbRecursionCheck verify_ucb_recursion(const TrajectoryRecord& traj, const BanditEnv& env,
                                              double sigma) {
  if (env.size() != 2) throw Error(ErrorKind::NotTwoArmed, "recursion check needs two arms");
  if (traj.config.algorithm != Algorithm::UCB) throw Error(ErrorKind::NotUCB, "trajectory is not UCB");
  if (!traj.has_play_times() || !traj.has_rewards()) {
    throw Error(ErrorKind::MissingHistory, "trajectory lacks play times or rewards");
  }
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidConfig, "sigma must be positive");

  UcbRecursionCheck out;
  out.opt_arm = env.k_star;
  out.sub_arm = 1 - env.k_star;
  out.sigma = sigma;
  out.horizon = traj.horizon;
  out.seed = traj.seed;
  const std::size_t s = out.sub_arm;
  const std::size_t o = out.opt_arm;
  const auto& sub_times = traj.play_times[s];
  const auto& opt_times = traj.play_times[o];
  const auto& sub_rewards = traj.rewards[s];
  const auto& opt_rewards = traj.rewards[o];
  if (sub_rewards.size() < sub_times.size() || opt_rewards.size() < opt_times.size()) {
    throw Error(ErrorKind::MissingHistory, "reward history shorter than play history");
  }

  // Prefix sums accumulated in play order, matching the policy's running sums.
  auto prefix = [](const std::vector<double>& xs) {
    std::vector<double> out(xs.size() + 1, 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) out[i + 1] = out[i] + xs[i];
    return out;
  };
  const auto sub_sum = prefix(sub_rewards);
  const auto opt_sum = prefix(opt_rewards);
  auto opt_count_before = [&](std::uint64_t t) {  // N_o(t)
    return static_cast<std::uint64_t>(
        std::upper_bound(opt_times.begin(), opt_times.end(), t) - opt_times.begin());
  };
  // Policy decision at time t given j plays of s and n_o plays of o so far.
  auto sub_wins = [&](std::uint64_t t, std::uint64_t j, std::uint64_t n_o) {
    if (n_o == 0) return false;
    const double log_t = std::log(static_cast<double>(t));
    const double v_s = ucb_value(sub_sum[j] / static_cast<double>(j), j, log_t, sigma);
    const double v_o = ucb_value(opt_sum[n_o] / static_cast<double>(n_o), n_o, log_t, sigma);
    return s < o ? v_s >= v_o : v_s > v_o;
  };

  const std::uint64_t arms = 2;
  for (std::size_t idx = 0; idx + 1 < sub_times.size(); ++idx) {
    UcbRecursionRow row;
    row.j = idx + 1;
    row.play_time = sub_times[idx];
    row.next_play_time = sub_times[idx + 1];
    const std::uint64_t tn = row.next_play_time;
    row.n_opt = opt_count_before(tn - 1);

    if (row.n_opt > 0 && tn > row.play_time) {
      const double mean_o = opt_sum[row.n_opt] / static_cast<double>(row.n_opt);
      const double mean_s = sub_sum[row.j] / static_cast<double>(row.j);
      const double bonus_o =
          sigma * std::sqrt(2.0 * std::log(static_cast<double>(tn)) / static_cast<double>(row.n_opt));
      const double inner = mean_o - mean_s + bonus_o;
      row.exponent = static_cast<double>(row.j) / (2.0 * sigma * sigma) * inner * inner;
      row.reconstructed = detail::reconstruct(row.play_time, row.exponent);
      row.closed_form_match = detail::closed_form_holds(row.play_time, tn, row.exponent);
    } else {
      row.exponent = NAN;
      row.reconstructed = NAN;
    }

    bool ok = tn > row.play_time;
    for (std::uint64_t t = std::max(row.play_time, arms) + 1; ok && t <= tn; ++t) {
      const bool wins = sub_wins(t, row.j, opt_count_before(t - 1));
      ok = (t == tn) ? wins : !wins;
    }
    if (tn <= arms) ok = tn == row.play_time + 1;  // both plays forced by initialization
    row.first_passage_match = ok;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace bandit_clt
