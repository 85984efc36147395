#pragma once

// Subcommands behind the command-line tool. Each takes a plain options struct
// (round-tripped through the manifest's "config" object) and a run directory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bandit_clt/appendix.hpp"
#include "bandit_clt/campaign.hpp"
#include "bandit_clt/coupling.hpp"
#include "bandit_clt/env.hpp"
#include "bandit_clt/errors.hpp"
#include "bandit_clt/io.hpp"
#include "bandit_clt/limits.hpp"
#include "bandit_clt/manifest.hpp"
#include "bandit_clt/normal.hpp"
#include "bandit_clt/rng.hpp"
#include "bandit_clt/svg.hpp"
#include "bandit_clt/trajectory.hpp"
#include "bandit_clt/ucb_recursion.hpp"

namespace bandit_clt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // a verification did not pass
inline constexpr int kExitUsage = 2;   // bad flags or configuration

using nlohmann::json;

namespace detail {

template <class T>
void read_field(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

inline void read_algorithm(const json& j, const char* key, Algorithm& out) {
  if (j.contains(key)) out = parse_algorithm(j.at(key).get<std::string>());
}

inline json algorithms_to_json(const std::vector<Algorithm>& algos) {
  auto out = json::array();
  for (auto a : algos) out.push_back(std::string(to_string(a)));
  return out;
}

inline std::vector<Algorithm> algorithms_from_json(const json& j) {
  std::vector<Algorithm> out;
  for (const auto& a : j) out.push_back(parse_algorithm(a.get<std::string>()));
  return out;
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidConfig, what);
}

inline void check_exponents(const std::vector<double>& exponents) {
  require(!exponents.empty(), "at least one tail exponent is required");
  for (double e : exponents) require(e < 0.0 && std::isfinite(e), "tail exponents must be negative");
}

inline void check_gaps(const std::vector<double>& gaps) {
  require(!gaps.empty(), "at least one gap is required");
  for (double g : gaps) require(g > 0.0 && std::isfinite(g), "gaps must be positive");
}

inline std::string exponent_tag(double e) { return format_number(e); }

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Design std for a target tail exponent: sigma^2 = |exponent| sigma0^2.
inline double design_std_for_exponent(double exponent, double reward_std) {
  if (!(exponent < 0.0)) throw Error(ErrorKind::InvalidConfig, "tail exponent must be negative");
  return reward_std * std::sqrt(-exponent);
}

struct CommandOutcome {
  int exit_code = kExitOk;
  std::vector<std::string> outputs;
  json summary = json::object();
};

// ---------------------------------------------------------------------------
// Campaign raw dumps

inline CsvTable raw_table(std::size_t arms) {
  CsvTable t{label_header(), {}};
  t.header.insert(t.header.end(), {"horizon", "replication"});
  for (std::size_t k = 0; k < arms; ++k) t.header.push_back("n_" + std::to_string(k));
  return t;
}

/// Appends per-replication counts until `cap` values have been written in total.
inline void append_raw(CsvTable& t, const CampaignLabel& label, const ReplicationStats& stats,
                       std::uint64_t cap) {
  const std::string algo(to_string(label.algorithm));
  for (const auto& hs : stats.horizons) {
    const std::size_t k = hs.counts.size();
    for (std::uint64_t r = 0; r < stats.replications; ++r) {
      if ((t.rows.size() + 1) * k > cap) return;
      std::vector<std::string> row{algo, format_number(label.design_variance), format_number(label.tail_exponent),
                                   format_number(hs.horizon), format_number(r)};
      for (std::size_t a = 0; a < k; ++a) row.push_back(format_number(hs.counts[a][r]));
      t.rows.push_back(std::move(row));
    }
  }
}

// ---------------------------------------------------------------------------
// fig1 / fig2: histograms of the sub-optimal count at one horizon

struct HistogramFigureOptions {
  Algorithm algorithm = Algorithm::UCB;
  std::vector<double> exponents{-2.0, -3.0, -4.0, -5.0};
  std::uint64_t horizon = 2000;
  std::uint64_t reps = 10'000;
  std::uint64_t seed = 1;
  double gap = 0.3;
  double reward_std = 1.0;
  unsigned workers = 0;
  bool dump_raw = false;
  std::uint64_t raw_cap = 1'000'000;

  void validate() const {
    detail::check_exponents(exponents);
    detail::require(horizon >= 2, "horizon must be at least 2");
    detail::require(reps >= 1, "reps must be at least 1");
    detail::require(gap > 0.0 && std::isfinite(gap), "gap must be positive");
    detail::require(reward_std > 0.0 && std::isfinite(reward_std), "reward std must be positive");
  }

  json to_json() const {
    return {{"algorithm", std::string(to_string(algorithm))},
            {"exponents", exponents},
            {"horizon", horizon},
            {"reps", reps},
            {"seed", seed},
            {"gap", gap},
            {"reward_std", reward_std},
            {"workers", workers},
            {"dump_raw", dump_raw},
            {"raw_cap", raw_cap}};
  }

  static HistogramFigureOptions from_json(const json& j, Algorithm fallback = Algorithm::UCB) {
    HistogramFigureOptions o;
    o.algorithm = fallback;
    detail::read_algorithm(j, "algorithm", o.algorithm);
    detail::read_field(j, "exponents", o.exponents);
    detail::read_field(j, "horizon", o.horizon);
    detail::read_field(j, "reps", o.reps);
    detail::read_field(j, "seed", o.seed);
    detail::read_field(j, "gap", o.gap);
    detail::read_field(j, "reward_std", o.reward_std);
    detail::read_field(j, "workers", o.workers);
    detail::read_field(j, "dump_raw", o.dump_raw);
    detail::read_field(j, "raw_cap", o.raw_cap);
    return o;
  }
};

struct CampaignRun {
  CampaignLabel label;
  CampaignConfig config;
  ReplicationStats stats;
};

/// One campaign per tail exponent, all on the same master seed.
inline std::vector<CampaignRun> histogram_campaigns(const HistogramFigureOptions& o) {
  o.validate();
  std::vector<CampaignRun> out;
  for (double e : o.exponents) {
    CampaignRun run;
    const double sigma = design_std_for_exponent(e, o.reward_std);
    run.label = {o.algorithm, sigma * sigma, e};
    run.config.env = gaussian_env({o.gap}, o.reward_std);
    run.config.policy = {o.algorithm, sigma, 0.0};
    run.config.horizons = {o.horizon};
    run.config.replications = o.reps;
    run.config.master_seed = o.seed;
    run.config.worker_count = o.workers;
    run.config.raw_dump_cap = o.raw_cap;
    run.stats = run_campaign(run.config);
    out.push_back(std::move(run));
  }
  return out;
}

inline CommandOutcome cmd_fig_histogram(const HistogramFigureOptions& o, const std::filesystem::path& dir,
                                        std::ostream& log) {
  CommandOutcome res;
  const auto runs = histogram_campaigns(o);
  auto moments = moments_table();
  auto raw = raw_table(2);
  json per_exponent = json::array();
  for (const auto& run : runs) {
    const std::vector<std::size_t> sub = run.config.env.suboptimal_arms();
    const std::string tag = detail::exponent_tag(run.label.tail_exponent);
    const auto hist = histogram_table(run.stats, sub);
    const std::string csv = "histogram_exp" + tag + ".csv";
    const std::string svg_name = "histogram_exp" + tag + ".svg";
    write_text(dir / csv, hist.str());
    const auto& arm = run.stats.horizons.front().arms[sub.front()];
    std::ostringstream title;
    title << to_string(o.algorithm) << ": N_" << sub.front() + 1 << "(" << o.horizon << "), gap " << o.gap
          << ", tail exponent " << tag;
    write_text(dir / svg_name, svg::bar_chart(arm.histogram.bins(), title.str(), "sub-optimal plays"));
    res.outputs.insert(res.outputs.end(), {csv, svg_name});
    append_moments(moments, run.label, run.config, run.stats);
    if (o.dump_raw) append_raw(raw, run.label, run.stats, o.raw_cap);

    const auto& m = arm.moments;
    per_exponent.push_back({{"tail_exponent", run.label.tail_exponent},
                            {"design_variance", run.label.design_variance},
                            {"mean", m.mean()},
                            {"std", m.std_dev()},
                            {"skewness", m.skewness()},
                            {"ks_clt", arm.ks_clt},
                            {"histogram_total", arm.histogram.total()}});
    log << "exponent " << tag << ": mean " << m.mean() << ", std " << m.std_dev() << ", skewness "
        << m.skewness() << '\n';
  }
  write_text(dir / "moments.csv", moments.str());
  res.outputs.push_back("moments.csv");
  if (o.dump_raw) {
    write_text(dir / "raw.csv", raw.str());
    res.outputs.push_back("raw.csv");
  }
  res.summary = {{"per_exponent", per_exponent}};
  write_text(dir / "summary.json", res.summary.dump(2) + "\n");
  res.outputs.push_back("summary.json");
  return res;
}

// ---------------------------------------------------------------------------
// fig3: observed / predicted regret moments over horizons

struct RatioFigureOptions {
  std::vector<Algorithm> algorithms{Algorithm::UCB, Algorithm::TS};
  std::vector<double> exponents{-1.0, -2.0, -3.0, -4.0, -5.0};
  std::vector<std::uint64_t> horizons{2000, 5000, 10000, 20000, 50000};
  std::uint64_t reps = 10'000;
  std::uint64_t seed = 1;
  double gap = 0.7;
  double reward_std = 1.0;
  unsigned workers = 0;
  bool dump_raw = false;
  std::uint64_t raw_cap = 1'000'000;

  void validate() const {
    detail::require(!algorithms.empty(), "at least one algorithm is required");
    detail::check_exponents(exponents);
    detail::require(!horizons.empty(), "at least one horizon is required");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
      detail::require(horizons[i] >= 2, "horizons must be at least 2");
      detail::require(i == 0 || horizons[i] > horizons[i - 1], "horizons must increase");
    }
    detail::require(reps >= 1, "reps must be at least 1");
    detail::require(gap > 0.0 && std::isfinite(gap), "gap must be positive");
    detail::require(reward_std > 0.0 && std::isfinite(reward_std), "reward std must be positive");
  }

  json to_json() const {
    return {{"algorithms", detail::algorithms_to_json(algorithms)},
            {"exponents", exponents},
            {"horizons", horizons},
            {"reps", reps},
            {"seed", seed},
            {"gap", gap},
            {"reward_std", reward_std},
            {"workers", workers},
            {"dump_raw", dump_raw},
            {"raw_cap", raw_cap}};
  }

  static RatioFigureOptions from_json(const json& j) {
    RatioFigureOptions o;
    if (j.contains("algorithms")) o.algorithms = detail::algorithms_from_json(j.at("algorithms"));
    detail::read_field(j, "exponents", o.exponents);
    detail::read_field(j, "horizons", o.horizons);
    detail::read_field(j, "reps", o.reps);
    detail::read_field(j, "seed", o.seed);
    detail::read_field(j, "gap", o.gap);
    detail::read_field(j, "reward_std", o.reward_std);
    detail::read_field(j, "workers", o.workers);
    detail::read_field(j, "dump_raw", o.dump_raw);
    detail::read_field(j, "raw_cap", o.raw_cap);
    return o;
  }
};

struct RatioRun {
  CampaignRun campaign;
  RatioCurve curve;
};

inline std::vector<RatioRun> ratio_campaigns(const RatioFigureOptions& o) {
  o.validate();
  std::vector<RatioRun> out;
  for (Algorithm algo : o.algorithms) {
    for (double e : o.exponents) {
      RatioRun run;
      const double sigma = design_std_for_exponent(e, o.reward_std);
      auto& c = run.campaign;
      c.label = {algo, sigma * sigma, e};
      c.config.env = gaussian_env({o.gap}, o.reward_std);
      c.config.policy = {algo, sigma, 0.0};
      c.config.horizons = o.horizons;
      c.config.replications = o.reps;
      c.config.master_seed = o.seed;
      c.config.worker_count = o.workers;
      c.config.raw_dump_cap = o.raw_cap;
      c.stats = run_campaign(c.config);
      run.curve = ratio_curve(c.config, c.stats);
      out.push_back(std::move(run));
    }
  }
  return out;
}

inline bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

inline bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

inline CommandOutcome cmd_fig3(const RatioFigureOptions& o, const std::filesystem::path& dir, std::ostream& log) {
  CommandOutcome res;
  const auto runs = ratio_campaigns(o);
  auto ratios = ratios_table();
  auto moments = moments_table();
  auto raw = raw_table(2);
  std::vector<svg::Series> mean_series, std_series;
  json curves = json::array();
  for (const auto& run : runs) {
    const auto& label = run.campaign.label;
    append_ratios(ratios, label, run.curve);
    append_moments(moments, label, run.campaign.config, run.campaign.stats);
    if (o.dump_raw) append_raw(raw, label, run.campaign.stats, o.raw_cap);
    svg::Series ms, ss;
    ms.label = ss.label = std::string(to_string(label.algorithm)) + ", exponent " + detail::exponent_tag(label.tail_exponent);
    std::vector<double> mean_ratio, std_ratio;
    for (const auto& p : run.curve.regret()) {
      ms.x.push_back(static_cast<double>(p.horizon));
      ms.y.push_back(p.mean_ratio);
      ss.x.push_back(static_cast<double>(p.horizon));
      ss.y.push_back(p.std_ratio);
      mean_ratio.push_back(p.mean_ratio);
      std_ratio.push_back(p.std_ratio);
    }
    mean_series.push_back(ms);
    std_series.push_back(ss);
    curves.push_back({{"algorithm", std::string(to_string(label.algorithm))},
                      {"tail_exponent", label.tail_exponent},
                      {"horizons", o.horizons},
                      {"mean_ratio", mean_ratio},
                      {"std_ratio", std_ratio},
                      {"mean_ratio_increasing", strictly_increasing(mean_ratio)},
                      {"std_ratio_increasing", strictly_increasing(std_ratio)}});
    log << ms.label << ": mean ratio at T=" << o.horizons.back() << " is " << mean_ratio.back()
        << ", std ratio " << std_ratio.back() << '\n';
  }
  write_text(dir / "ratios.csv", ratios.str());
  write_text(dir / "moments.csv", moments.str());
  write_text(dir / "ratios_mean.svg",
             svg::line_chart(mean_series, "observed / predicted regret mean", "horizon T", "ratio", 1.0));
  write_text(dir / "ratios_std.svg",
             svg::line_chart(std_series, "observed / predicted regret std", "horizon T", "ratio", 1.0));
  res.outputs = {"ratios.csv", "moments.csv", "ratios_mean.svg", "ratios_std.svg"};
  if (o.dump_raw) {
    write_text(dir / "raw.csv", raw.str());
    res.outputs.push_back("raw.csv");
  }
  res.summary = {{"curves", curves}};
  write_text(dir / "summary.json", res.summary.dump(2) + "\n");
  res.outputs.push_back("summary.json");
  return res;
}

// ---------------------------------------------------------------------------
// verify: property and trend suites

struct SuiteResult {
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string summary;
  json details = json::object();

  json to_json() const {
    return {{"suite", name}, {"passed", passed}, {"seconds", seconds}, {"summary", summary}, {"details", details}};
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"slln-trend", "clt-normality", "independence", "appendix-lemmas",
                                              "quadrature-oracle"};
  return names;
}

/// Gaussian tail sandwich with the stated 1/4, 1/2 constants on a grid over (0.01, 10],
/// log-sum-exp bounds on random sequences, and the decay of the geometric-max statistic.
inline SuiteResult suite_appendix_lemmas(std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteResult r;
  r.name = "appendix-lemmas";

  const int grid = 10'000;
  std::uint64_t lower_fail = 0, upper_fail = 0, mills_fail = 0;
  double lower_fail_max_z = NAN, upper_fail_min_z = NAN;
  for (int i = 1; i <= grid; ++i) {
    const double z = 0.01 + (10.0 - 0.01) * static_cast<double>(i) / grid;
    const auto b = gaussian_tail_bounds(z);
    if (!b.lower_holds()) {
      ++lower_fail;
      lower_fail_max_z = z;
    }
    if (!b.upper_holds()) {
      ++upper_fail;
      if (std::isnan(upper_fail_min_z)) upper_fail_min_z = z;
    }
    const auto m = mills_ratio_bounds(z);
    mills_fail += !(m.lower_holds() && m.upper_holds());
  }
  const bool tail_ok = lower_fail == 0 && upper_fail == 0;

  CounterStream s(seed, 0, 0, StreamPurpose::Auxiliary);
  std::uint64_t lse_fail = 0;
  std::vector<double> a;
  for (int seq = 0; seq < 1000; ++seq) {
    const auto len = static_cast<std::size_t>(1 + std::floor(s.uniform() * 100.0));
    const double scale = std::pow(10.0, 3.0 * s.uniform() - 1.0);
    a.resize(len);
    for (auto& x : a) x = scale * s.normal();
    const double m = *std::max_element(a.begin(), a.end());
    const double l = log_sum_exp(a);
    lse_fail += !(m <= l && l <= m + std::log(static_cast<double>(len)));
  }
  const bool lse_ok = lse_fail == 0;

  const std::vector<std::uint64_t> ns{100, 1000, 10000};
  const int realizations = 100;
  std::vector<double> mean_stat(ns.size(), 0.0);
  int single_decreasing = 0;
  for (int rep = 0; rep < realizations; ++rep) {
    const CounterStream g(seed, static_cast<std::uint64_t>(rep), 1, StreamPurpose::Auxiliary);
    std::vector<double> v;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      v.push_back(geometric_max_statistic(ns[i], [](std::uint64_t j) { return -static_cast<double>(j) / 10.0; },
                                          0.5, g));
      mean_stat[i] += v.back() / realizations;
    }
    single_decreasing += strictly_decreasing(v);
  }
  const bool geo_ok = strictly_decreasing(mean_stat);

  r.passed = tail_ok && lse_ok && geo_ok;
  r.details = {{"tail_bounds",
                {{"grid_points", grid},
                 {"lower_violations", lower_fail},
                 {"upper_violations", upper_fail},
                 {"largest_z_lower_violated", lower_fail_max_z},
                 {"smallest_z_upper_violated", upper_fail_min_z},
                 {"passed", tail_ok},
                 {"classical_mills_violations", mills_fail}}},
               {"log_sum_exp", {{"sequences", 1000}, {"violations", lse_fail}, {"passed", lse_ok}}},
               {"geometric_max",
                {{"n", ns},
                 {"mean_statistic", mean_stat},
                 {"realizations", realizations},
                 {"realizations_decreasing", single_decreasing},
                 {"passed", geo_ok}}}};
  std::ostringstream os;
  os << "tail bounds " << (tail_ok ? "ok" : "violated") << " (lower " << lower_fail << ", upper " << upper_fail
     << " of " << grid << " points); log-sum-exp " << (lse_ok ? "ok" : "violated") << "; geometric max "
     << (geo_ok ? "decreasing" : "not decreasing");
  r.summary = os.str();
  r.seconds = detail::seconds_since(t0);
  return r;
}

/// play_prob_exact against brute-force Monte Carlo over the optimal arm's noise.
inline SuiteResult suite_quadrature_oracle(std::uint64_t seed, std::size_t states = 20,
                                           std::uint64_t draws = 1'000'000) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteResult r;
  r.name = "quadrature-oracle";
  CounterStream pick(seed, 0, 0, StreamPurpose::Auxiliary);
  json rows = json::array();
  std::size_t ok = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < states; ++i) {
    const double mu_k = 2.0 * pick.uniform() - 1.0;
    const double mu_s = 2.0 * pick.uniform() - 1.0;
    const auto n_k = static_cast<std::uint64_t>(std::floor(pick.uniform() * 200.0));
    const auto n_s = static_cast<std::uint64_t>(std::floor(pick.uniform() * 2000.0));
    const double sigma = 0.5 + 1.5 * pick.uniform();
    const double exact = play_prob_exact(mu_k, n_k, mu_s, n_s, sigma);

    CounterStream z(seed, i + 1, 0, StreamPurpose::Auxiliary);
    const double scale_k = std::sqrt(1.0 + static_cast<double>(n_k)) / sigma;
    const double noise = sigma / std::sqrt(1.0 + static_cast<double>(n_s));
    // Average the smaller tail: a running mean of values next to 1 drifts by rounding.
    const bool upper = exact > 0.5;
    MomentAccumulator m;
    for (std::uint64_t d = 0; d < draws; ++d) {
      const double x = scale_k * (mu_s - mu_k + noise * z.normal());
      m.add(upper ? normal_cdf(x) : normal_sf(x));
    }
    const double se = m.std_dev() / std::sqrt(static_cast<double>(draws));
    const double diff = std::abs((upper ? 1.0 - exact : exact) - m.mean());
    // Deep in the tail the sample misses the draws that carry the mass, so the
    // standard error is itself unreliable there; an absolute floor decides instead.
    constexpr double floor = 1e-12;
    const bool pass = diff <= std::max(3.0 * se, floor);
    ok += pass;
    if (3.0 * se > floor) worst = std::max(worst, diff / se);
    rows.push_back({{"mu_hat_k", mu_k},
                    {"n_k", n_k},
                    {"mu_hat_star", mu_s},
                    {"n_star", n_s},
                    {"sigma", sigma},
                    {"exact", exact},
                    {"monte_carlo", upper ? 1.0 - m.mean() : m.mean()},
                    {"standard_error", se},
                    {"passed", pass}});
  }
  r.passed = ok == states;
  r.details = {{"draws", draws}, {"states", rows}, {"worst_z", worst}};
  std::ostringstream os;
  os << ok << "/" << states << " states within max(3 se, 1e-12) (worst " << std::setprecision(3) << worst
     << " se where the standard error governs)";
  r.summary = os.str();
  r.seconds = detail::seconds_since(t0);
  return r;
}

/// Mean of N_2(T)/ln T approaches 2 sigma^2/gap^2 over increasing horizons.
inline SuiteResult suite_slln_trend(std::uint64_t seed, std::uint64_t reps = 1000, unsigned workers = 0,
                                    std::vector<std::uint64_t> horizons = {1000, 10000, 100000},
                                    double gap = 0.7, std::vector<double> design_variances = {1.0, 2.0}) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteResult r;
  r.name = "slln-trend";
  r.passed = true;
  json rows = json::array();
  std::ostringstream os;
  for (Algorithm algo : {Algorithm::UCB, Algorithm::TS}) {
    for (double var : design_variances) {
      CampaignConfig cfg;
      cfg.env = gaussian_env({gap});
      cfg.policy = {algo, std::sqrt(var), 0.0};
      cfg.horizons = horizons;
      cfg.replications = reps;
      cfg.master_seed = seed;
      cfg.worker_count = workers;
      const auto stats = run_campaign(cfg);
      const double slope = slln_limit(cfg.env, cfg.policy.design_std).per_arm_slln_slope[1];
      std::vector<double> ratio, dist;
      for (const auto& hs : stats.horizons) {
        ratio.push_back(hs.arms[1].moments.mean() / std::log(static_cast<double>(hs.horizon)));
        dist.push_back(std::abs(ratio.back() - slope));
      }
      const bool ok = strictly_decreasing(dist);
      r.passed = r.passed && ok;
      rows.push_back({{"algorithm", std::string(to_string(algo))},
                      {"design_variance", var},
                      {"slope", slope},
                      {"horizons", horizons},
                      {"mean_count_over_log_t", ratio},
                      {"distance", dist},
                      {"passed", ok}});
      os << to_string(algo) << " sigma2=" << var << ": |N/lnT - slope| " << std::setprecision(4) << dist.front()
         << " -> " << dist.back() << (ok ? " (decreasing); " : " (NOT decreasing); ");
    }
  }
  r.details = {{"reps", reps}, {"gap", gap}, {"runs", rows}};
  r.summary = os.str();
  r.seconds = detail::seconds_since(t0);
  return r;
}

/// KS distance of CLT-standardized UCB counts to N(0,1) shrinks with T.
inline SuiteResult suite_clt_normality(std::uint64_t seed, std::uint64_t reps = 10'000, unsigned workers = 0,
                                       std::vector<std::uint64_t> horizons = {2000, 10000, 50000},
                                       double gap = 0.7, double design_variance = 5.0, double threshold = 0.15) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteResult r;
  r.name = "clt-normality";
  CampaignConfig cfg;
  cfg.env = gaussian_env({gap});
  cfg.policy = PolicyConfig::ucb(std::sqrt(design_variance));
  cfg.horizons = horizons;
  cfg.replications = reps;
  cfg.master_seed = seed;
  cfg.worker_count = workers;
  const auto stats = run_campaign(cfg);
  std::vector<double> ks, ks_emp, skew, mean_ratio, std_ratio;
  for (const auto& hs : stats.horizons) {
    const auto& arm = hs.arms[1];
    const auto pred = clt_params(cfg.env, cfg.policy.design_std, hs.horizon);
    ks.push_back(arm.ks_clt);
    ks_emp.push_back(arm.ks_empirical);
    skew.push_back(arm.moments.skewness());
    mean_ratio.push_back(arm.moments.mean() / pred.per_arm_clt_mean[1]);
    std_ratio.push_back(arm.moments.std_dev() / pred.per_arm_clt_std[1]);
  }
  r.passed = ks.back() < ks.front() && ks.back() <= threshold;
  r.details = {{"algorithm", "ucb"},
               {"gap", gap},
               {"design_variance", design_variance},
               {"reps", reps},
               {"horizons", horizons},
               {"ks_clt", ks},
               {"ks_empirical", ks_emp},
               {"skewness", skew},
               {"mean_ratio", mean_ratio},
               {"std_ratio", std_ratio},
               {"threshold", threshold}};
  std::ostringstream os;
  os << "KS(CLT) " << std::setprecision(4) << ks.front() << " at T=" << horizons.front() << " -> " << ks.back()
     << " at T=" << horizons.back() << " (threshold " << threshold << ")";
  r.summary = os.str();
  r.seconds = detail::seconds_since(t0);
  return r;
}

/// Pairwise correlations of sub-optimal counts in a three-armed bandit.
inline SuiteResult suite_independence(std::uint64_t seed, std::uint64_t reps = 10'000, unsigned workers = 0,
                                      std::uint64_t horizon = 50'000, std::vector<double> gaps = {0.4, 0.7},
                                      double threshold = 0.1) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteResult r;
  r.name = "independence";
  r.passed = true;
  json rows = json::array();
  std::ostringstream os;
  for (Algorithm algo : {Algorithm::UCB, Algorithm::TS}) {
    CampaignConfig cfg;
    cfg.env = gaussian_env(gaps);
    cfg.policy = {algo, 1.0, 0.0};
    cfg.horizons = {horizon};
    cfg.replications = reps;
    cfg.master_seed = seed;
    cfg.worker_count = workers;
    const auto stats = run_campaign(cfg);
    const auto& hs = stats.horizons.front();
    double worst = NAN;
    if (!hs.correlations.empty()) {
      worst = 0.0;
      for (std::size_t a = 0; a < hs.correlations.size(); ++a) {
        for (std::size_t b = a + 1; b < hs.correlations.size(); ++b) {
          worst = std::max(worst, std::abs(hs.correlations[a][b]));
        }
      }
    }
    const bool ok = worst <= threshold;
    r.passed = r.passed && ok;
    rows.push_back({{"algorithm", std::string(to_string(algo))},
                    {"correlations", hs.correlations},
                    {"max_abs_correlation", worst},
                    {"passed", ok}});
    os << to_string(algo) << " max |rho| " << std::setprecision(3) << worst << "; ";
  }
  r.details = {{"gaps", gaps}, {"horizon", horizon}, {"reps", reps}, {"threshold", threshold}, {"runs", rows}};
  r.summary = os.str();
  r.seconds = detail::seconds_since(t0);
  return r;
}

struct VerifyOptions {
  std::vector<std::string> suites = suite_names();
  std::uint64_t seed = 1;
  std::uint64_t reps = 0;  // 0: each suite's own default
  unsigned workers = 0;

  void validate() const {
    detail::require(!suites.empty(), "no suites selected");
    for (const auto& s : suites) {
      if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end()) {
        throw Error(ErrorKind::UnknownSuite, "unknown suite '" + s + "'");
      }
    }
  }

  json to_json() const { return {{"suites", suites}, {"seed", seed}, {"reps", reps}, {"workers", workers}}; }

  static VerifyOptions from_json(const json& j) {
    VerifyOptions o;
    detail::read_field(j, "suites", o.suites);
    detail::read_field(j, "seed", o.seed);
    detail::read_field(j, "reps", o.reps);
    detail::read_field(j, "workers", o.workers);
    return o;
  }
};

inline SuiteResult run_suite(const std::string& name, const VerifyOptions& o) {
  if (name == "appendix-lemmas") return suite_appendix_lemmas(o.seed);
  if (name == "quadrature-oracle") return suite_quadrature_oracle(o.seed);
  if (name == "slln-trend") return suite_slln_trend(o.seed, o.reps ? o.reps : 1000, o.workers);
  if (name == "clt-normality") return suite_clt_normality(o.seed, o.reps ? o.reps : 10'000, o.workers);
  if (name == "independence") return suite_independence(o.seed, o.reps ? o.reps : 10'000, o.workers);
  throw Error(ErrorKind::UnknownSuite, "unknown suite '" + name + "'");
}

inline CommandOutcome cmd_verify(const VerifyOptions& o, const std::filesystem::path& dir, std::ostream& log) {
  o.validate();
  CommandOutcome res;
  json suites = json::array();
  bool all = true;
  for (const auto& name : o.suites) {
    const auto r = run_suite(name, o);
    all = all && r.passed;
    suites.push_back(r.to_json());
    log << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.summary << " [" << std::fixed
        << std::setprecision(1) << r.seconds << " s]" << std::defaultfloat << '\n';
  }
  res.summary = {{"passed", all}, {"suites", suites}};
  write_text(dir / "verify.json", res.summary.dump(2) + "\n");
  res.outputs = {"verify.json"};
  res.exit_code = all ? kExitOk : kExitFailed;
  return res;
}

// ---------------------------------------------------------------------------
// coupling: sandwich diagnostics on two-armed TS trajectories

struct CouplingOptions {
  std::vector<double> gaps{0.5};
  double design_variance = 1.0;
  double reward_std = 1.0;
  std::uint64_t horizon = 100'000;
  std::uint64_t reps = 1;
  std::uint64_t seed = 1;
  double eps = NAN;  // NaN: a quarter of (gap/sigma)^2, the middle of the allowed range
  std::size_t bins = 20;
  bool rows = true;  // write per-epoch rows

  double design_std() const { return std::sqrt(design_variance); }

  double resolved_eps() const {
    if (!std::isnan(eps)) return eps;
    const double g = gaps.front() / design_std();
    return g * g / 4.0;
  }

  void validate() const {
    detail::check_gaps(gaps);
    if (gaps.size() != 1) throw Error(ErrorKind::NotTwoArmed, "coupling diagnostics need a two-armed bandit");
    detail::require(design_variance > 0.0 && std::isfinite(design_variance), "design variance must be positive");
    detail::require(reward_std > 0.0 && std::isfinite(reward_std), "reward std must be positive");
    detail::require(horizon >= 2, "horizon must be at least 2");
    detail::require(reps >= 1, "reps must be at least 1");
    detail::require(bins >= 1, "bins must be at least 1");
    const double g = gaps.front() / design_std();
    const double e = resolved_eps();
    if (!(e > 0.0 && e < g * g / 2.0)) throw Error(ErrorKind::EpsOutOfRange, "eps must lie in (0, (gap/sigma)^2/2)");
  }

  json to_json() const {
    return {{"gaps", gaps},         {"design_variance", design_variance},
            {"reward_std", reward_std}, {"horizon", horizon},
            {"reps", reps},         {"seed", seed},
            {"eps", resolved_eps()}, {"bins", bins},
            {"rows", rows}};
  }

  static CouplingOptions from_json(const json& j) {
    CouplingOptions o;
    detail::read_field(j, "gaps", o.gaps);
    detail::read_field(j, "design_variance", o.design_variance);
    detail::read_field(j, "reward_std", o.reward_std);
    detail::read_field(j, "horizon", o.horizon);
    detail::read_field(j, "reps", o.reps);
    detail::read_field(j, "seed", o.seed);
    detail::read_field(j, "eps", o.eps);
    detail::read_field(j, "bins", o.bins);
    detail::read_field(j, "rows", o.rows);
    return o;
  }
};

struct CouplingStudy {
  double eps = 0.0;
  CouplingTally early;
  CouplingTally late;
  std::vector<std::uint64_t> bin_starts;
  std::vector<CouplingTally> bins;
  std::vector<CouplingTally> late_per_trajectory;

  json to_json() const {
    auto tally = [](const CouplingTally& t) {
      return json{{"epochs", t.epochs},
                  {"tilde_violations", t.tilde_violations},
                  {"tilde_lower_violations", t.tilde_lower_violations},
                  {"tilde_upper_violations", t.tilde_upper_violations},
                  {"tilde_fraction", t.tilde_fraction()},
                  {"hat_epochs", t.hat_epochs},
                  {"hat_violations", t.hat_violations},
                  {"hat_lower_violations", t.hat_lower_violations},
                  {"hat_upper_violations", t.hat_upper_violations},
                  {"hat_fraction", t.hat_fraction()}};
    };
    return {{"eps", eps},
            {"early", tally(early)},
            {"late", tally(late)},
            {"tilde_late_not_above_early", late.tilde_fraction() <= early.tilde_fraction()},
            {"hat_late_not_above_early", late.hat_fraction() <= early.hat_fraction()}};
  }
};

/// Runs `reps` TS trajectories and tallies sandwich violations. `on_report`
/// sees each report (with rows when requested) before its rows are dropped.
inline CouplingStudy coupling_study(const CouplingOptions& o,
                                    const std::function<void(std::uint64_t, const CouplingReport&)>& on_report = {}) {
  o.validate();
  const auto env = gaussian_env(o.gaps, o.reward_std);
  const auto policy = PolicyConfig::ts(o.design_std());
  CouplingStudy study;
  study.eps = o.resolved_eps();
  TrajectoryOptions topts{true, true, {}};
  for (std::uint64_t r = 0; r < o.reps; ++r) {
    const auto traj = run_trajectory(env, policy, o.horizon, {o.seed, r}, topts);
    const auto rep = sandwich_check(traj, env, o.design_std(), study.eps, {o.rows, o.bins});
    if (on_report) on_report(r, rep);
    study.early += rep.early;
    study.late += rep.late;
    study.late_per_trajectory.push_back(rep.late);
    if (study.bins.empty()) {
      study.bins.resize(rep.bins.size());
      study.bin_starts = rep.bin_starts;
    }
    for (std::size_t b = 0; b < rep.bins.size(); ++b) study.bins[b] += rep.bins[b];
  }
  return study;
}

inline CsvTable coupling_rows_table() {
  return {{"replication", "t", "n_sub", "n_opt", "mu_hat_sub", "mu_hat_opt", "p_exact", "p_tilde", "p_tilde_plus",
           "p_tilde_minus", "p_hat", "p_hat_plus", "tilde_lower_ok", "tilde_upper_ok", "hat_skipped",
           "hat_lower_ok", "hat_upper_ok"},
          {}};
}

inline CommandOutcome cmd_coupling(const CouplingOptions& o, const std::filesystem::path& dir, std::ostream& log) {
  o.validate();
  CommandOutcome res;
  std::ofstream rows_out;
  if (o.rows) {
    rows_out.open(dir / "coupling.csv", std::ios::binary);
    if (!rows_out) throw Error(ErrorKind::Io, "cannot open coupling.csv");
    rows_out << coupling_rows_table().str();
  }
  const auto study = coupling_study(o, [&](std::uint64_t r, const CouplingReport& rep) {
    if (!o.rows) return;
    CsvTable t;
    for (const auto& x : rep.rows) {
      t.add(r, x.t, x.n_sub, x.n_opt, x.mu_hat_sub, x.mu_hat_opt, x.p_exact, x.p_tilde, x.p_tilde_plus,
            x.p_tilde_minus, x.p_hat, x.p_hat_plus, x.tilde_lower_ok, x.tilde_upper_ok, x.hat_skipped,
            x.hat_lower_ok, x.hat_upper_ok);
    }
    const std::string text = t.str();
    rows_out << text.substr(text.find('\n') + 1);  // drop the empty header line
  });
  if (o.rows) {
    rows_out.close();
    if (!rows_out) throw Error(ErrorKind::Io, "failed writing coupling.csv");
    res.outputs.push_back("coupling.csv");
  }

  CsvTable bins{{"bin", "t_start", "epochs", "tilde_violations", "tilde_lower_violations",
                 "tilde_upper_violations", "tilde_fraction", "hat_epochs", "hat_violations",
                 "hat_lower_violations", "hat_upper_violations", "hat_fraction"},
                {}};
  for (std::size_t b = 0; b < study.bins.size(); ++b) {
    const auto& t = study.bins[b];
    bins.add(b, study.bin_starts[b], t.epochs, t.tilde_violations, t.tilde_lower_violations,
             t.tilde_upper_violations, t.tilde_fraction(), t.hat_epochs, t.hat_violations,
             t.hat_lower_violations, t.hat_upper_violations, t.hat_fraction());
  }
  write_text(dir / "coupling_bins.csv", bins.str());
  res.outputs.push_back("coupling_bins.csv");

  res.summary = {{"config", o.to_json()}, {"result", study.to_json()}};
  write_text(dir / "coupling.json", res.summary.dump(2) + "\n");
  res.outputs.push_back("coupling.json");
  const bool trend = study.late.tilde_fraction() <= study.early.tilde_fraction() &&
                     study.late.hat_fraction() <= study.early.hat_fraction();
  log << "eps " << study.eps << "; p-tilde sandwich violations early " << study.early.tilde_fraction() << ", late "
      << study.late.tilde_fraction() << "; p-hat sandwich violations early " << study.early.hat_fraction()
      << ", late " << study.late.hat_fraction() << (trend ? "" : " (late above early)") << '\n';
  res.exit_code = trend ? kExitOk : kExitFailed;
  return res;
}

// ---------------------------------------------------------------------------
// recursion: UCB play-time recursion

struct RecursionOptions {
  std::vector<double> gaps{0.5};
  double design_variance = 1.0;
  double reward_std = 1.0;
  std::uint64_t horizon = 10'000;
  std::uint64_t reps = 1;
  std::uint64_t seed = 1;
  std::string form = "closed";  // which form decides the exit code: closed | first-passage

  double design_std() const { return std::sqrt(design_variance); }

  void validate() const {
    detail::check_gaps(gaps);
    if (gaps.size() != 1) throw Error(ErrorKind::NotTwoArmed, "recursion check needs a two-armed bandit");
    detail::require(design_variance > 0.0 && std::isfinite(design_variance), "design variance must be positive");
    detail::require(reward_std > 0.0 && std::isfinite(reward_std), "reward std must be positive");
    detail::require(horizon >= 2, "horizon must be at least 2");
    detail::require(reps >= 1, "reps must be at least 1");
    detail::require(form == "closed" || form == "first-passage", "form must be 'closed' or 'first-passage'");
  }

  json to_json() const {
    return {{"gaps", gaps}, {"design_variance", design_variance}, {"reward_std", reward_std}, {"horizon", horizon},
            {"reps", reps}, {"seed", seed},                       {"form", form}};
  }

  static RecursionOptions from_json(const json& j) {
    RecursionOptions o;
    detail::read_field(j, "gaps", o.gaps);
    detail::read_field(j, "design_variance", o.design_variance);
    detail::read_field(j, "reward_std", o.reward_std);
    detail::read_field(j, "horizon", o.horizon);
    detail::read_field(j, "reps", o.reps);
    detail::read_field(j, "seed", o.seed);
    detail::read_field(j, "form", o.form);
    return o;
  }
};

struct RecursionStudy {
  std::uint64_t trajectories = 0;
  std::uint64_t rows = 0;
  std::uint64_t closed_form_matches = 0;
  std::uint64_t first_passage_matches = 0;
  std::uint64_t trajectories_all_closed_form = 0;
  std::uint64_t trajectories_all_first_passage = 0;

  bool all_closed_form() const { return closed_form_matches == rows; }
  bool all_first_passage() const { return first_passage_matches == rows; }

  json to_json() const {
    return {{"trajectories", trajectories},
            {"rows", rows},
            {"closed_form_matches", closed_form_matches},
            {"first_passage_matches", first_passage_matches},
            {"trajectories_all_closed_form", trajectories_all_closed_form},
            {"trajectories_all_first_passage", trajectories_all_first_passage}};
  }
};

inline RecursionStudy recursion_study(
    const RecursionOptions& o, const std::function<void(std::uint64_t, const UcbRecursionCheck&)>& on_check = {}) {
  o.validate();
  const auto env = gaussian_env(o.gaps, o.reward_std);
  const auto policy = PolicyConfig::ucb(o.design_std());
  RecursionStudy study;
  for (std::uint64_t r = 0; r < o.reps; ++r) {
    const auto traj = run_trajectory(env, policy, o.horizon, {o.seed, r}, {true, true, {}});
    const auto chk = verify_ucb_recursion(traj, env, o.design_std());
    if (on_check) on_check(r, chk);
    ++study.trajectories;
    study.rows += chk.rows.size();
    study.closed_form_matches += chk.closed_form_matches();
    study.first_passage_matches += chk.first_passage_matches();
    study.trajectories_all_closed_form += chk.all_closed_form();
    study.trajectories_all_first_passage += chk.all_first_passage();
  }
  return study;
}

inline CommandOutcome cmd_recursion(const RecursionOptions& o, const std::filesystem::path& dir, std::ostream& log) {
  o.validate();
  CommandOutcome res;
  CsvTable rows{{"replication", "j", "play_time", "next_play_time", "n_opt", "exponent", "reconstructed",
                 "closed_form_match", "first_passage_match"},
                {}};
  const auto study = recursion_study(o, [&](std::uint64_t r, const UcbRecursionCheck& chk) {
    for (const auto& x : chk.rows) {
      rows.add(r, x.j, x.play_time, x.next_play_time, x.n_opt, x.exponent, x.reconstructed, x.closed_form_match,
               x.first_passage_match);
    }
  });
  write_text(dir / "recursion.csv", rows.str());
  res.summary = {{"config", o.to_json()}, {"result", study.to_json()}};
  write_text(dir / "recursion.json", res.summary.dump(2) + "\n");
  res.outputs = {"recursion.csv", "recursion.json"};
  log << "closed form matches " << study.closed_form_matches << "/" << study.rows << ", first-passage matches "
      << study.first_passage_matches << "/" << study.rows << '\n';
  const bool ok = o.form == "closed" ? study.all_closed_form() : study.all_first_passage();
  res.exit_code = ok ? kExitOk : kExitFailed;
  return res;
}

// ---------------------------------------------------------------------------
// Run directories, manifests and dispatch

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"fig1", "fig2", "fig3", "verify", "coupling", "recursion"};
  return names;
}

/// $BANDIT_CLT_OUT, else ./runs.
inline std::filesystem::path default_out_root() {
  if (const char* env = std::getenv("BANDIT_CLT_OUT"); env && *env) return env;
  return "runs";
}

/// <root>/<subcommand>_<utc timestamp>_seed<seed>, with a numeric suffix if taken.
inline std::filesystem::path make_run_dir(const std::filesystem::path& root, const std::string& subcommand,
                                          std::uint64_t seed) {
  const std::string base = subcommand + "_" + utc_timestamp({}, true).substr(0, 16) + "_seed" + std::to_string(seed);
  std::filesystem::create_directories(root);
  for (int i = 1;; ++i) {
    const auto dir = root / (i == 1 ? base : base + "_" + std::to_string(i));
    std::error_code ec;
    if (std::filesystem::create_directory(dir, ec)) return dir;
    if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
  }
}

/// Normalizes a raw config for `subcommand` (fills defaults, validates).
inline json resolve_config(const std::string& subcommand, const json& config) {
  if (subcommand == "fig1" || subcommand == "fig2") {
    auto o = HistogramFigureOptions::from_json(config, subcommand == "fig1" ? Algorithm::UCB : Algorithm::TS);
    o.validate();
    return o.to_json();
  }
  if (subcommand == "fig3") {
    auto o = RatioFigureOptions::from_json(config);
    o.validate();
    return o.to_json();
  }
  if (subcommand == "verify") {
    auto o = VerifyOptions::from_json(config);
    o.validate();
    return o.to_json();
  }
  if (subcommand == "coupling") {
    auto o = CouplingOptions::from_json(config);
    o.validate();
    return o.to_json();
  }
  if (subcommand == "recursion") {
    auto o = RecursionOptions::from_json(config);
    o.validate();
    return o.to_json();
  }
  throw Error(ErrorKind::InvalidConfig, "unknown subcommand '" + subcommand + "'");
}

inline CommandOutcome dispatch(const std::string& subcommand, const json& config, const std::filesystem::path& dir,
                               std::ostream& log) {
  if (subcommand == "fig1" || subcommand == "fig2") {
    return cmd_fig_histogram(HistogramFigureOptions::from_json(config), dir, log);
  }
  if (subcommand == "fig3") return cmd_fig3(RatioFigureOptions::from_json(config), dir, log);
  if (subcommand == "verify") return cmd_verify(VerifyOptions::from_json(config), dir, log);
  if (subcommand == "coupling") return cmd_coupling(CouplingOptions::from_json(config), dir, log);
  if (subcommand == "recursion") return cmd_recursion(RecursionOptions::from_json(config), dir, log);
  throw Error(ErrorKind::InvalidConfig, "unknown subcommand '" + subcommand + "'");
}

struct RunOutcome {
  int exit_code = kExitOk;
  RunManifest manifest;
  std::filesystem::path dir;
};

/// Creates the run directory, writes an incomplete manifest, runs the
/// subcommand and finalizes the manifest. Library errors map to exit code 2.
inline RunOutcome execute(const std::string& subcommand, const json& config, const std::filesystem::path& out_root,
                          std::ostream& log, std::ostream& err) {
  RunOutcome out;
  RunManifest& m = out.manifest;
  m.subcommand = subcommand;
  m.config = config;
  m.master_seed = config.value("seed", std::uint64_t{0});
  out.dir = make_run_dir(out_root, subcommand, m.master_seed);
  m.output_dir = out.dir;
  m.started_at = utc_timestamp();
  const auto t0 = std::chrono::steady_clock::now();
  m.write();
  try {
    m.config = resolve_config(subcommand, config);
    m.write();
    const auto res = dispatch(subcommand, m.config, out.dir, log);
    m.outputs = res.outputs;
    out.exit_code = res.exit_code;
    m.status = "complete";
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    m.status = "failed";
    m.error = std::string(to_string(e.kind())) + ": " + e.what();
    out.exit_code = kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    m.status = "failed";
    m.error = e.what();
    out.exit_code = kExitUsage;
  }
  m.finished_at = utc_timestamp();
  m.wall_seconds = detail::seconds_since(t0);
  m.exit_code = out.exit_code;
  m.write();
  log << "output: " << out.dir.string() << '\n';
  return out;
}

/// Re-executes the run recorded in `manifest_path` into a fresh directory.
/// `workers` overrides the recorded worker count; it never changes results.
inline RunOutcome rerun(const std::filesystem::path& manifest_path, const std::filesystem::path& out_root,
                        std::optional<unsigned> workers, std::ostream& log, std::ostream& err) {
  const auto m = RunManifest::read(manifest_path);
  json config = m.config;
  if (workers && config.contains("workers")) config["workers"] = *workers;
  return execute(m.subcommand, config, out_root, log, err);
}

}  // namespace bandit_clt::cli
