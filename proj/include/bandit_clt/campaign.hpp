#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "bandit_clt/env.hpp"
#include "bandit_clt/errors.hpp"
#include "bandit_clt/limits.hpp"
#include "bandit_clt/policy.hpp"
#include "bandit_clt/stats.hpp"
#include "bandit_clt/trajectory.hpp"

namespace bandit_clt {

/// Replications per merge block. Fixed so that the merge tree, and therefore
/// every floating-point result, is the same for any worker count.
inline constexpr std::uint64_t kCampaignBlockSize = 256;

struct CampaignConfig {
  BanditEnv env;
  PolicyConfig policy;
  std::vector<std::uint64_t> horizons;  // increasing; each replication runs to the last one
  std::uint64_t replications = 10'000;
  std::uint64_t master_seed = 0;
  unsigned worker_count = 0;  // 0: hardware concurrency
  std::uint64_t raw_dump_cap = 1'000'000;

  void validate() const {
    if (horizons.empty()) throw Error(ErrorKind::InvalidConfig, "no horizons");
    for (std::size_t i = 1; i < horizons.size(); ++i) {
      if (horizons[i] <= horizons[i - 1]) throw Error(ErrorKind::InvalidConfig, "horizons must increase");
    }
    if (horizons.front() == 0) throw Error(ErrorKind::InvalidConfig, "horizons must be positive");
    if (replications == 0) throw Error(ErrorKind::InvalidConfig, "replications must be >= 1");
    policy.validate();
    if (env.size() < 2) throw Error(ErrorKind::EmptyEnv, "a bandit needs at least 2 arms");
    // a checkpoint inside the forced initialization has no CLT reference
    if (policy.algorithm == Algorithm::UCB && horizons.front() < env.size()) {
      throw Error(ErrorKind::HorizonTooShort, "UCB horizons must be >= number of arms");
    }
  }
};

struct ArmHorizonStats {
  std::size_t arm = 0;
  MomentAccumulator moments;
  Histogram histogram;
  // Distance of the standardized counts to N(0,1). `ks_clt` standardizes by
  // the CLT prediction, `ks_empirical` by the sample's own mean and std.
  double ks_clt = NAN;
  double ks_empirical = NAN;
};

struct HorizonStats {
  std::uint64_t horizon = 0;
  std::vector<ArmHorizonStats> arms;
  MomentAccumulator regret;
  std::vector<std::size_t> correlation_arms;  // sub-optimal arms, in order
  std::vector<std::vector<double>> correlations;  // empty when undefined
  // counts[k][r] = N_k(horizon) in replication r.
  std::vector<std::vector<std::uint64_t>> counts;
};

struct ReplicationStats {
  std::uint64_t replications = 0;
  bool variance_undefined = false;  // a single replication
  std::vector<HorizonStats> horizons;

  const HorizonStats& at(std::uint64_t horizon) const {
    for (const auto& h : horizons) {
      if (h.horizon == horizon) return h;
    }
    throw Error(ErrorKind::InvalidConfig, "horizon not in campaign");
  }
};

namespace detail {

struct BlockResult {
  // [horizon][arm]
  std::vector<std::vector<MomentAccumulator>> moments;
  std::vector<std::vector<Histogram>> histograms;
  std::vector<MomentAccumulator> regret;
  // [horizon][arm][replication within block]
  std::vector<std::vector<std::vector<std::uint64_t>>> counts;
};

inline BlockResult run_block(const CampaignConfig& cfg, std::uint64_t first, std::uint64_t last) {
  const std::size_t nh = cfg.horizons.size();
  const std::size_t k = cfg.env.size();
  BlockResult out;
  out.moments.assign(nh, std::vector<MomentAccumulator>(k));
  out.histograms.assign(nh, std::vector<Histogram>(k));
  out.regret.assign(nh, MomentAccumulator{});
  out.counts.assign(nh, std::vector<std::vector<std::uint64_t>>(k));
  TrajectoryOptions opts;
  opts.checkpoints = cfg.horizons;
  for (std::uint64_t r = first; r < last; ++r) {
    const auto rec = run_trajectory(cfg.env, cfg.policy, cfg.horizons.back(), {cfg.master_seed, r}, opts);
    for (std::size_t h = 0; h < nh; ++h) {
      const Checkpoint* cp = rec.checkpoint_at(cfg.horizons[h]);
      std::uint64_t total = 0;
      for (std::size_t a = 0; a < k; ++a) {
        const std::uint64_t n = cp->counts[a];
        total += n;
        out.moments[h][a].add(static_cast<double>(n));
        out.histograms[h][a].add(static_cast<std::int64_t>(n));
        out.counts[h][a].push_back(n);
      }
      if (total != cfg.horizons[h]) throw Error(ErrorKind::InvalidConfig, "count conservation violated");
      out.regret[h].add(cp->regret);
    }
  }
  return out;
}

}  // namespace detail

/// Runs `replications` independent trajectories. Replication r uses the streams
/// of (master_seed, r). Blocks of kCampaignBlockSize replications are simulated
/// concurrently and merged sequentially in block order.
inline ReplicationStats run_campaign(const CampaignConfig& cfg) {
  cfg.validate();
  const std::uint64_t nblocks = (cfg.replications + kCampaignBlockSize - 1) / kCampaignBlockSize;
  std::vector<detail::BlockResult> blocks(nblocks);

  unsigned workers = cfg.worker_count ? cfg.worker_count : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, nblocks));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      try {
        const std::uint64_t first = b * kCampaignBlockSize;
        const std::uint64_t last = std::min(cfg.replications, first + kCampaignBlockSize);
        blocks[b] = detail::run_block(cfg, first, last);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(nblocks);
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  const std::size_t k = cfg.env.size();
  ReplicationStats stats;
  stats.replications = cfg.replications;
  stats.variance_undefined = cfg.replications < 2;
  const auto sub = cfg.env.suboptimal_arms();
  for (std::size_t h = 0; h < cfg.horizons.size(); ++h) {
    HorizonStats hs;
    hs.horizon = cfg.horizons[h];
    hs.arms.resize(k);
    hs.counts.assign(k, {});
    for (std::size_t a = 0; a < k; ++a) {
      hs.arms[a].arm = a;
      hs.counts[a].reserve(cfg.replications);
    }
    for (const auto& block : blocks) {
      for (std::size_t a = 0; a < k; ++a) {
        hs.arms[a].moments.merge(block.moments[h][a]);
        hs.arms[a].histogram.merge(block.histograms[h][a]);
        hs.counts[a].insert(hs.counts[a].end(), block.counts[h][a].begin(), block.counts[h][a].end());
      }
      hs.regret.merge(block.regret[h]);
    }

    const LimitPrediction pred = clt_params(cfg.env, cfg.policy.design_std, hs.horizon);
    for (std::size_t a = 0; a < k; ++a) {
      if (cfg.replications < 2) break;
      std::vector<double> xs(hs.counts[a].begin(), hs.counts[a].end());
      if (a != cfg.env.k_star && pred.per_arm_clt_std[a] > 0.0) {
        hs.arms[a].ks_clt = ks_normal(xs, pred.per_arm_clt_mean[a], pred.per_arm_clt_std[a]);
      }
      const double sd = hs.arms[a].moments.std_dev();
      if (sd > 0.0) hs.arms[a].ks_empirical = ks_normal(xs, hs.arms[a].moments.mean(), sd);
    }

    hs.correlation_arms = sub;
    if (sub.size() >= 2 && cfg.replications >= 2) {
      std::vector<std::vector<double>> cols;
      for (std::size_t a : sub) cols.emplace_back(hs.counts[a].begin(), hs.counts[a].end());
      try {
        hs.correlations = independence_check(cols);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateVariance) throw;
      }
    }
    stats.horizons.push_back(std::move(hs));
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Observed versus predicted moments

struct RatioPoint {
  std::uint64_t horizon = 0;
  int arm = -1;  // -1 for regret
  double observed_mean = NAN;
  double predicted_mean = NAN;
  double mean_ratio = NAN;
  double mean_ratio_se = NAN;
  double observed_std = NAN;
  double predicted_std = NAN;
  double std_ratio = NAN;
  double std_ratio_se = NAN;
};

struct RatioCurve {
  Algorithm algorithm = Algorithm::UCB;
  double design_std = 1.0;
  std::vector<RatioPoint> points;

  /// Regret points in horizon order.
  std::vector<RatioPoint> regret() const {
    std::vector<RatioPoint> out;
    for (const auto& p : points) {
      if (p.arm < 0) out.push_back(p);
    }
    return out;
  }
  std::vector<RatioPoint> arm(int k) const {
    std::vector<RatioPoint> out;
    for (const auto& p : points) {
      if (p.arm == k) out.push_back(p);
    }
    return out;
  }
};

/// Builds a ratio point from observed moments. Standard errors: sd/sqrt(n) for
/// the mean and the normal-theory sd/sqrt(2(n-1)) for the standard deviation.
inline RatioPoint make_ratio_point(std::uint64_t horizon, int arm, const MomentAccumulator& m,
                                   double predicted_mean, double predicted_std) {
  RatioPoint p;
  p.horizon = horizon;
  p.arm = arm;
  const double n = static_cast<double>(m.count());
  p.observed_mean = m.mean();
  p.observed_std = m.std_dev();
  p.predicted_mean = predicted_mean;
  p.predicted_std = predicted_std;
  p.mean_ratio = p.observed_mean / predicted_mean;
  p.std_ratio = p.observed_std / predicted_std;
  if (m.count() >= 2) {
    p.mean_ratio_se = p.observed_std / std::sqrt(n) / predicted_mean;
    p.std_ratio_se = p.observed_std / std::sqrt(2.0 * (n - 1.0)) / predicted_std;
  }
  return p;
}

inline RatioCurve ratio_curve(const CampaignConfig& cfg, const ReplicationStats& stats) {
  RatioCurve curve;
  curve.algorithm = cfg.policy.algorithm;
  curve.design_std = cfg.policy.design_std;
  for (const auto& hs : stats.horizons) {
    const LimitPrediction pred = clt_params(cfg.env, cfg.policy.design_std, hs.horizon);
    curve.points.push_back(
        make_ratio_point(hs.horizon, -1, hs.regret, pred.regret_clt_mean, pred.regret_clt_std));
    for (std::size_t a : cfg.env.suboptimal_arms()) {
      curve.points.push_back(make_ratio_point(hs.horizon, static_cast<int>(a), hs.arms[a].moments,
                                              pred.per_arm_clt_mean[a], pred.per_arm_clt_std[a]));
    }
  }
  return curve;
}

}  // namespace bandit_clt
