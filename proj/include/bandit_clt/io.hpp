#pragma once

// Text formats: shortest round-trip numbers, headered CSV tables and the JSON
// form of a trajectory.

#include <algorithm>
#include <charconv>
#include <concepts>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "bandit_clt/campaign.hpp"
#include "bandit_clt/errors.hpp"
#include "bandit_clt/trajectory.hpp"

namespace bandit_clt {

/// Shortest decimal form that parses back to the same double.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

template <std::integral T>
std::string format_number(T v) {
  return std::to_string(v);
}

inline double parse_number(std::string_view s) {
  if (s == "nan") return NAN;
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::Io, "not a number: '" + std::string(s) + "'");
  }
  return v;
}

/// Comma-separated table with a header line. Fields never contain commas.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  template <class... Ts>
  void add(const Ts&... fields) {
    rows.push_back({to_field(fields)...});
  }

  std::string str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& fields) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += fields[i];
      }
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }

  static CsvTable parse(std::string_view text) {
    CsvTable t;
    bool first = true;
    while (!text.empty()) {
      const auto nl = text.find('\n');
      const std::string_view line = text.substr(0, nl);
      std::vector<std::string> fields;
      std::size_t start = 0;
      for (;;) {
        const auto comma = line.find(',', start);
        fields.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      if (first) {
        t.header = std::move(fields);
        first = false;
      } else {
        if (fields.size() != t.header.size()) throw Error(ErrorKind::Io, "ragged CSV row");
        t.rows.push_back(std::move(fields));
      }
      if (nl == std::string_view::npos) break;
      text.remove_prefix(nl + 1);
    }
    return t;
  }

 private:
  static std::string to_field(const std::string& s) { return s; }
  static std::string to_field(std::string_view s) { return std::string(s); }
  static std::string to_field(const char* s) { return s; }
  static std::string to_field(bool b) { return b ? "1" : "0"; }
  template <class T>
  static std::string to_field(const T& v) {
    return format_number(v);
  }
};

inline void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Trajectories

inline nlohmann::json to_json(const TrajectoryRecord& rec) {
  nlohmann::json j;
  j["horizon"] = rec.horizon;
  j["config"] = {{"algorithm", std::string(to_string(rec.config.algorithm))},
                 {"design_std", rec.config.design_std},
                 {"prior_mean", rec.config.prior_mean},
                 {"prior_std", rec.config.prior_std()}};
  j["seed"] = {{"master", rec.seed.master}, {"replication", rec.seed.replication}};
  j["final_counts"] = rec.final_counts;
  j["final_regret"] = rec.final_regret;
  auto cps = nlohmann::json::array();
  auto regret_cps = nlohmann::json::array();
  for (const auto& c : rec.checkpoints) {
    cps.push_back({{"t", c.t}, {"counts", c.counts}, {"regret", c.regret}});
    regret_cps.push_back({c.t, c.regret});
  }
  j["regret_checkpoints"] = regret_cps;
  j["checkpoints"] = cps;
  j["play_times"] = rec.play_times;
  j["rewards"] = rec.rewards;
  return j;
}

inline TrajectoryRecord trajectory_from_json(const nlohmann::json& j) {
  TrajectoryRecord rec;
  rec.horizon = j.at("horizon").get<std::uint64_t>();
  rec.config.algorithm = parse_algorithm(j.at("config").at("algorithm").get<std::string>());
  rec.config.design_std = j.at("config").at("design_std").get<double>();
  rec.seed.master = j.at("seed").at("master").get<std::uint64_t>();
  rec.seed.replication = j.at("seed").at("replication").get<std::uint64_t>();
  rec.final_counts = j.at("final_counts").get<std::vector<std::uint64_t>>();
  rec.final_regret = j.at("final_regret").get<double>();
  for (const auto& c : j.at("checkpoints")) {
    rec.checkpoints.push_back({c.at("t").get<std::uint64_t>(), c.at("counts").get<std::vector<std::uint64_t>>(),
                               c.at("regret").get<double>()});
  }
  rec.play_times = j.at("play_times").get<std::vector<std::vector<std::uint64_t>>>();
  rec.rewards = j.at("rewards").get<std::vector<std::vector<double>>>();
  return rec;
}

/// Header of the compact trajectory row: horizon, n_0..n_{K-1}, regret, seed, replication.
inline std::vector<std::string> trajectory_csv_header(std::size_t arms) {
  std::vector<std::string> h{"horizon"};
  for (std::size_t k = 0; k < arms; ++k) h.push_back("n_" + std::to_string(k));
  h.insert(h.end(), {"regret", "seed", "replication"});
  return h;
}

inline std::vector<std::string> trajectory_csv_row(const TrajectoryRecord& rec) {
  std::vector<std::string> r{format_number(rec.horizon)};
  for (auto n : rec.final_counts) r.push_back(format_number(n));
  r.push_back(format_number(rec.final_regret));
  r.push_back(format_number(rec.seed.master));
  r.push_back(format_number(rec.seed.replication));
  return r;
}

// ---------------------------------------------------------------------------
// Campaign tables. `label` columns identify the campaign inside a multi-campaign run.

struct CampaignLabel {
  Algorithm algorithm = Algorithm::UCB;
  double design_variance = 1.0;
  double tail_exponent = NAN;
};

/// `arms` selects the arms to include; empty means all.
inline CsvTable histogram_table(const ReplicationStats& stats, const std::vector<std::size_t>& arms = {}) {
  CsvTable t{{"horizon", "arm", "bin", "count"}, {}};
  for (const auto& hs : stats.horizons) {
    for (const auto& arm : hs.arms) {
      if (!arms.empty() && std::find(arms.begin(), arms.end(), arm.arm) == arms.end()) continue;
      for (const auto& [bin, count] : arm.histogram.bins()) t.add(hs.horizon, arm.arm, bin, count);
    }
  }
  return t;
}

inline std::vector<std::string> label_header() { return {"algorithm", "design_variance", "tail_exponent"}; }

inline CsvTable moments_table() {
  CsvTable t;
  t.header = label_header();
  for (const char* h : {"horizon", "quantity", "n", "mean", "variance", "skewness", "clt_mean", "clt_std",
                        "ks_clt", "ks_empirical"}) {
    t.header.emplace_back(h);
  }
  return t;
}

inline void append_moments(CsvTable& t, const CampaignLabel& label, const CampaignConfig& cfg,
                           const ReplicationStats& stats) {
  const std::string algo(to_string(label.algorithm));
  for (const auto& hs : stats.horizons) {
    const LimitPrediction pred = clt_params(cfg.env, cfg.policy.design_std, hs.horizon);
    for (const auto& arm : hs.arms) {
      const auto& m = arm.moments;
      t.add(algo, label.design_variance, label.tail_exponent, hs.horizon, "arm" + std::to_string(arm.arm),
            m.count(), m.mean(), m.variance(), m.skewness(), pred.per_arm_clt_mean[arm.arm],
            pred.per_arm_clt_std[arm.arm], arm.ks_clt, arm.ks_empirical);
    }
    const auto& r = hs.regret;
    t.add(algo, label.design_variance, label.tail_exponent, hs.horizon, "regret", r.count(), r.mean(),
          r.variance(), r.skewness(), pred.regret_clt_mean, pred.regret_clt_std, NAN, NAN);
  }
}

inline CsvTable ratios_table() {
  CsvTable t;
  t.header = label_header();
  for (const char* h : {"horizon", "quantity", "observed_mean", "predicted_mean", "mean_ratio", "mean_ratio_se",
                        "observed_std", "predicted_std", "std_ratio", "std_ratio_se"}) {
    t.header.emplace_back(h);
  }
  return t;
}

inline void append_ratios(CsvTable& t, const CampaignLabel& label, const RatioCurve& curve) {
  const std::string algo(to_string(label.algorithm));
  for (const auto& p : curve.points) {
    t.add(algo, label.design_variance, label.tail_exponent, p.horizon,
          p.arm < 0 ? std::string("regret") : "arm" + std::to_string(p.arm), p.observed_mean, p.predicted_mean,
          p.mean_ratio, p.mean_ratio_se, p.observed_std, p.predicted_std, p.std_ratio, p.std_ratio_se);
  }
}

inline CsvTable correlations_table() {
  CsvTable t;
  t.header = label_header();
  for (const char* h : {"horizon", "arm_a", "arm_b", "rho"}) t.header.emplace_back(h);
  return t;
}

inline void append_correlations(CsvTable& t, const CampaignLabel& label, const ReplicationStats& stats) {
  const std::string algo(to_string(label.algorithm));
  for (const auto& hs : stats.horizons) {
    if (hs.correlations.empty()) continue;
    for (std::size_t a = 0; a < hs.correlation_arms.size(); ++a) {
      for (std::size_t b = a + 1; b < hs.correlation_arms.size(); ++b) {
        t.add(algo, label.design_variance, label.tail_exponent, hs.horizon, hs.correlation_arms[a],
              hs.correlation_arms[b], hs.correlations[a][b]);
      }
    }
  }
}

}  // namespace bandit_clt
