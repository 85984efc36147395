#pragma once

// manifest.json: what a run was asked to do and whether it finished.
// Written with status "incomplete" before any work starts, rewritten on exit.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "bandit_clt/errors.hpp"
#include "bandit_clt/io.hpp"

#ifndef BANDIT_CLT_VERSION
#define BANDIT_CLT_VERSION "0.1.0"
#endif

namespace bandit_clt {

inline constexpr int kManifestSchema = 1;

inline std::string code_version() { return BANDIT_CLT_VERSION; }

/// UTC time as 2026-01-31T12:00:00Z. `compact` drops the separators (for directory names).
inline std::string utc_timestamp(std::chrono::system_clock::time_point tp = std::chrono::system_clock::now(),
                                 bool compact = false) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, compact ? "%Y%m%dT%H%M%SZ" : "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunManifest {
  std::string subcommand;
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t master_seed = 0;
  std::filesystem::path output_dir;
  std::string code_version = bandit_clt::code_version();
  std::string started_at;
  std::string finished_at;
  double wall_seconds = -1.0;
  std::string status = "incomplete";  // incomplete | complete | failed
  int exit_code = -1;
  std::string error;
  std::vector<std::string> outputs;  // file names relative to output_dir

  nlohmann::json to_json() const {
    return {{"schema", kManifestSchema},
            {"subcommand", subcommand},
            {"config", config},
            {"master_seed", master_seed},
            {"output_dir", output_dir.string()},
            {"code_version", code_version},
            {"started_at", started_at},
            {"finished_at", finished_at.empty() ? nlohmann::json() : nlohmann::json(finished_at)},
            {"wall_seconds", wall_seconds < 0 ? nlohmann::json() : nlohmann::json(wall_seconds)},
            {"status", status},
            {"exit_code", exit_code < 0 ? nlohmann::json() : nlohmann::json(exit_code)},
            {"error", error.empty() ? nlohmann::json() : nlohmann::json(error)},
            {"outputs", outputs}};
  }

  static RunManifest from_json(const nlohmann::json& j) {
    try {
      RunManifest m;
      m.subcommand = j.at("subcommand").get<std::string>();
      m.config = j.at("config");
      m.master_seed = j.at("master_seed").get<std::uint64_t>();
      m.output_dir = j.value("output_dir", std::string());
      m.code_version = j.value("code_version", std::string());
      m.started_at = j.value("started_at", std::string());
      if (j.contains("finished_at") && j["finished_at"].is_string()) m.finished_at = j["finished_at"];
      if (j.contains("wall_seconds") && j["wall_seconds"].is_number()) m.wall_seconds = j["wall_seconds"];
      m.status = j.value("status", std::string("incomplete"));
      if (j.contains("exit_code") && j["exit_code"].is_number()) m.exit_code = j["exit_code"];
      if (j.contains("error") && j["error"].is_string()) m.error = j["error"];
      if (j.contains("outputs")) m.outputs = j["outputs"].get<std::vector<std::string>>();
      return m;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Io, std::string("malformed manifest: ") + e.what());
    }
  }

  void write() const { write_text(output_dir / "manifest.json", to_json().dump(2) + "\n"); }

  static RunManifest read(const std::filesystem::path& path) {
    try {
      return from_json(nlohmann::json::parse(read_text(path)));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::Io, "cannot parse " + path.string() + ": " + e.what());
    }
  }
};

}  // namespace bandit_clt
