// Two-armed Gaussian bandit: observed sub-optimal plays against the CLT prediction.
//
//   two_armed_clt [reps] [seed]

#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "bandit_clt/campaign.hpp"
#include "bandit_clt/limits.hpp"

using namespace bandit_clt;

int main(int argc, char** argv) {
  const std::uint64_t reps = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2000;
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 7;

  CampaignConfig cfg;
  cfg.env = gaussian_env({0.7});
  cfg.horizons = {2000, 10000, 50000};
  cfg.replications = reps;
  cfg.master_seed = seed;

  std::cout << std::fixed << std::setprecision(2);
  for (auto policy : {PolicyConfig::ucb(1.0), PolicyConfig::ts(1.0)}) {
    cfg.policy = policy;
    const auto stats = run_campaign(cfg);
    std::cout << to_string(policy.algorithm) << '\n';
    for (const auto& hs : stats.horizons) {
      const auto pred = clt_params(cfg.env, policy.design_std, hs.horizon);
      const auto& m = hs.arms[1].moments;
      std::cout << "  T=" << std::setw(6) << hs.horizon << "  N_2 mean " << std::setw(7) << m.mean() << " (CLT "
                << pred.per_arm_clt_mean[1] << ")  std " << std::setw(6) << m.std_dev() << " (CLT "
                << pred.per_arm_clt_std[1] << ")  KS " << std::setprecision(3) << hs.arms[1].ks_clt
                << std::setprecision(2) << '\n';
    }
  }
}
