// bandit_clt: figure reproduction, verification suites and diagnostics.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bandit_clt/harness.hpp"

namespace cli = bandit_clt::cli;
using bandit_clt::Algorithm;

namespace {

struct Common {
  std::string out;
  std::uint64_t seed = 1;
  unsigned workers = 0;
};

void add_common(CLI::App* sub, Common& c, bool with_workers = true) {
  sub->add_option("--out", c.out, "output root (default: $BANDIT_CLT_OUT or ./runs)");
  sub->add_option("--seed", c.seed, "master seed")->capture_default_str();
  if (with_workers) sub->add_option("--workers", c.workers, "worker threads, 0 = all cores")->capture_default_str();
}

Algorithm algo_from(const std::string& s) { return bandit_clt::parse_algorithm(s); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thompson sampling and UCB: regret CLT simulations"};
  app.set_version_flag("--version", bandit_clt::code_version());
  app.require_subcommand(1);

  Common common;
  std::string algo;

  // fig1 / fig2
  cli::HistogramFigureOptions hist;
  auto add_hist = [&](const char* name, const char* help, const char* default_algo) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, common);
    sub->add_option("--algo", algo, "ucb or ts")->check(CLI::IsMember({"ucb", "ts"}))->default_str(default_algo);
    sub->add_option("--exponents", hist.exponents, "tail exponents; sigma^2 = |e| sigma0^2")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--horizon", hist.horizon)->capture_default_str();
    sub->add_option("--reps", hist.reps, "replications")->capture_default_str();
    sub->add_option("--gap", hist.gap)->capture_default_str();
    sub->add_option("--reward-std", hist.reward_std, "sigma0, std of every arm")->capture_default_str();
    sub->add_flag("--dump-raw", hist.dump_raw, "write per-replication counts to raw.csv");
    sub->add_option("--raw-cap", hist.raw_cap, "max values in raw.csv")->capture_default_str();
    return sub;
  };
  auto* fig1 = add_hist("fig1", "histograms of sub-optimal plays, UCB by default", "ucb");
  auto* fig2 = add_hist("fig2", "histograms of sub-optimal plays, TS by default", "ts");

  // fig3
  cli::RatioFigureOptions ratio;
  std::vector<std::string> algos;
  auto* fig3 = app.add_subcommand("fig3", "observed / predicted regret mean and std over horizons");
  add_common(fig3, common);
  fig3->add_option("--algos", algos, "algorithms (default ucb,ts)")
      ->delimiter(',')
      ->check(CLI::IsMember({"ucb", "ts"}));
  fig3->add_option("--exponents", ratio.exponents)->delimiter(',')->capture_default_str();
  fig3->add_option("--horizons", ratio.horizons)->delimiter(',')->capture_default_str();
  fig3->add_option("--reps", ratio.reps)->capture_default_str();
  fig3->add_option("--gap", ratio.gap)->capture_default_str();
  fig3->add_option("--reward-std", ratio.reward_std)->capture_default_str();
  fig3->add_flag("--dump-raw", ratio.dump_raw);
  fig3->add_option("--raw-cap", ratio.raw_cap)->capture_default_str();

  // verify
  cli::VerifyOptions verify;
  auto* ver = app.add_subcommand("verify", "property and trend suites; exit 1 on failure");
  add_common(ver, common);
  ver->add_option("--suites", verify.suites, "comma-separated suite names")->delimiter(',')->capture_default_str();
  ver->add_option("--reps", verify.reps, "replications for Monte Carlo suites, 0 = suite default")
      ->capture_default_str();

  // coupling
  cli::CouplingOptions coup;
  auto* cpl = app.add_subcommand("coupling", "TS play-probability sandwich diagnostics (two arms)");
  add_common(cpl, common, false);
  cpl->add_option("--gaps", coup.gaps, "gaps of the sub-optimal arms")->delimiter(',')->capture_default_str();
  cpl->add_option("--design-variance", coup.design_variance, "sigma^2")->capture_default_str();
  cpl->add_option("--reward-std", coup.reward_std)->capture_default_str();
  cpl->add_option("--horizon", coup.horizon)->capture_default_str();
  cpl->add_option("--reps", coup.reps, "trajectories")->capture_default_str();
  cpl->add_option("--eps", coup.eps, "slack in (0, (gap/sigma)^2/2); default a quarter of (gap/sigma)^2");
  cpl->add_option("--bins", coup.bins, "time bins in coupling_bins.csv")->capture_default_str();
  bool no_rows = false;
  cpl->add_flag("--no-rows", no_rows, "skip the per-epoch coupling.csv");

  // recursion
  cli::RecursionOptions rec;
  auto* rcs = app.add_subcommand("recursion", "UCB play-time recursion check (two arms)");
  add_common(rcs, common, false);
  rcs->add_option("--gaps", rec.gaps)->delimiter(',')->capture_default_str();
  rcs->add_option("--design-variance", rec.design_variance)->capture_default_str();
  rcs->add_option("--reward-std", rec.reward_std)->capture_default_str();
  rcs->add_option("--horizon", rec.horizon)->capture_default_str();
  rcs->add_option("--reps", rec.reps)->capture_default_str();
  rcs->add_option("--form", rec.form, "form deciding the exit code")
      ->check(CLI::IsMember({"closed", "first-passage"}))
      ->capture_default_str();

  // rerun
  std::string manifest_path;
  std::optional<unsigned> rerun_workers;
  auto* rer = app.add_subcommand("rerun", "re-execute a run from its manifest.json");
  rer->add_option("manifest", manifest_path)->required()->check(CLI::ExistingFile);
  rer->add_option("--out", common.out);
  rer->add_option("--workers", rerun_workers, "override the recorded worker count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  const std::filesystem::path out_root =
      common.out.empty() ? cli::default_out_root() : std::filesystem::path(common.out);
  try {
    if (rer->parsed()) {
      return cli::rerun(manifest_path, out_root, rerun_workers, std::cout, std::cerr).exit_code;
    }

    std::string name;
    nlohmann::json config;
    CLI::App* sub = nullptr;
    if (fig1->parsed() || fig2->parsed()) {
      sub = fig1->parsed() ? fig1 : fig2;
      name = sub->get_name();
      hist.algorithm = algo.empty() ? (fig1->parsed() ? Algorithm::UCB : Algorithm::TS) : algo_from(algo);
      hist.seed = common.seed;
      hist.workers = common.workers;
      config = hist.to_json();
    } else if (fig3->parsed()) {
      sub = fig3;
      name = "fig3";
      if (!algos.empty()) {
        ratio.algorithms.clear();
        for (const auto& a : algos) ratio.algorithms.push_back(algo_from(a));
      }
      ratio.seed = common.seed;
      ratio.workers = common.workers;
      config = ratio.to_json();
    } else if (ver->parsed()) {
      sub = ver;
      name = "verify";
      verify.seed = common.seed;
      verify.workers = common.workers;
      config = verify.to_json();
    } else if (cpl->parsed()) {
      sub = cpl;
      name = "coupling";
      coup.seed = common.seed;
      coup.rows = !no_rows;
      config = coup.to_json();
    } else {
      sub = rcs;
      name = "recursion";
      rec.seed = common.seed;
      config = rec.to_json();
    }

    try {
      cli::resolve_config(name, config);
    } catch (const bandit_clt::Error& e) {
      std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n\n" << sub->help();
      return cli::kExitUsage;
    }
    return cli::execute(name, config, out_root, std::cout, std::cerr).exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitUsage;
  }
}
