#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "bandit_clt/harness.hpp"

using namespace bandit_clt;
namespace fs = std::filesystem;

namespace {

class HarnessTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() /
            ("bandit_clt_harness_" + std::to_string(::getpid()) + "_" + info->name());
    fs::remove_all(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  cli::RunOutcome run(const std::string& sub, const nlohmann::json& cfg) {
    log_.str("");
    err_.str("");
    return cli::execute(sub, cfg, root_, log_, err_);
  }

  fs::path root_;
  std::ostringstream log_, err_;
};

cli::HistogramFigureOptions small_hist() {
  cli::HistogramFigureOptions o;
  o.reps = 300;
  o.horizon = 400;
  o.workers = 2;
  return o;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BANDIT_CLT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_F(HarnessTest, Fig1WritesOneHistogramPerExponent) {
  const auto out = run("fig1", small_hist().to_json());
  ASSERT_EQ(out.exit_code, cli::kExitOk) << err_.str();
  EXPECT_EQ(out.manifest.status, "complete");
  for (const char* tag : {"-2", "-3", "-4", "-5"}) {
    const auto path = out.dir / (std::string("histogram_exp") + tag + ".csv");
    ASSERT_TRUE(fs::exists(path)) << path;
    EXPECT_TRUE(fs::exists(out.dir / (std::string("histogram_exp") + tag + ".svg")));
    const auto t = CsvTable::parse(read_text(path));
    EXPECT_EQ(t.header, (std::vector<std::string>{"horizon", "arm", "bin", "count"}));
    std::uint64_t total = 0;
    for (const auto& row : t.rows) {
      EXPECT_EQ(row[1], "1");
      total += static_cast<std::uint64_t>(parse_number(row[3]));
    }
    EXPECT_EQ(total, 300u);
  }
  const auto m = RunManifest::read(out.dir / "manifest.json");
  EXPECT_EQ(m.subcommand, "fig1");
  EXPECT_EQ(m.config.at("algorithm"), "ucb");
  EXPECT_EQ(m.master_seed, 1u);
  EXPECT_EQ(m.exit_code, 0);
  EXPECT_FALSE(m.finished_at.empty());
  EXPECT_EQ(m.code_version, code_version());
}

TEST_F(HarnessTest, SingleReplicationGivesASingleBar) {
  auto o = small_hist();
  o.reps = 1;
  o.exponents = {-2.0};
  o.algorithm = Algorithm::TS;
  const auto out = run("fig2", o.to_json());
  ASSERT_EQ(out.exit_code, cli::kExitOk) << err_.str();
  const auto t = CsvTable::parse(read_text(out.dir / "histogram_exp-2.csv"));
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][3], "1");
  EXPECT_EQ(out.manifest.config.at("algorithm"), "ts");
}

TEST_F(HarnessTest, RerunFromManifestIsByteIdentical) {
  auto o = small_hist();
  o.workers = 1;
  o.dump_raw = true;
  const auto a = run("fig1", o.to_json());
  ASSERT_EQ(a.exit_code, 0);
  const auto b = cli::rerun(a.dir / "manifest.json", root_, 8u, log_, err_);
  ASSERT_EQ(b.exit_code, 0);
  EXPECT_NE(a.dir, b.dir);
  EXPECT_EQ(b.manifest.config.at("workers"), 8);
  EXPECT_EQ(a.manifest.outputs, b.manifest.outputs);
  for (const auto& name : a.manifest.outputs) {
    if (fs::path(name).extension() == ".json") continue;
    EXPECT_EQ(read_text(a.dir / name), read_text(b.dir / name)) << name;
  }
}

TEST_F(HarnessTest, Fig3RatiosAndRoundTrip) {
  cli::RatioFigureOptions o;
  o.exponents = {-1.0, -3.0};
  o.horizons = {500, 2000};
  o.reps = 200;
  const auto out = run("fig3", o.to_json());
  ASSERT_EQ(out.exit_code, cli::kExitOk) << err_.str();
  const auto text = read_text(out.dir / "ratios.csv");
  const auto t = CsvTable::parse(text);
  EXPECT_EQ(t.str(), text);
  // 2 algorithms x 2 exponents x 2 horizons x (regret + arm1)
  EXPECT_EQ(t.rows.size(), 16u);
  EXPECT_TRUE(fs::exists(out.dir / "ratios_mean.svg"));
  EXPECT_TRUE(fs::exists(out.dir / "moments.csv"));
}

TEST_F(HarnessTest, VerifyAppendixSuiteReportsAndFailsOnStatedConstants) {
  cli::VerifyOptions o;
  o.suites = {"appendix-lemmas"};
  const auto out = run("verify", o.to_json());
  const auto j = nlohmann::json::parse(read_text(out.dir / "verify.json"));
  const auto& d = j["suites"][0]["details"];
  EXPECT_EQ(d["log_sum_exp"]["violations"], 0);
  EXPECT_EQ(d["tail_bounds"]["classical_mills_violations"], 0);
  EXPECT_TRUE(d["geometric_max"]["passed"].get<bool>());
  EXPECT_GT(d["tail_bounds"]["lower_violations"].get<int>(), 0);
  EXPECT_EQ(out.exit_code, cli::kExitFailed);
  EXPECT_EQ(out.manifest.status, "complete");
}

TEST_F(HarnessTest, VerifyQuadratureSuitePasses) {
  const auto r = cli::suite_quadrature_oracle(3, 5, 100'000);
  EXPECT_TRUE(r.passed) << r.summary;
}

TEST_F(HarnessTest, UnknownSuiteIsAUsageError) {
  cli::VerifyOptions o;
  o.suites = {"no-such-suite"};
  const auto out = run("verify", o.to_json());
  EXPECT_EQ(out.exit_code, cli::kExitUsage);
  EXPECT_EQ(out.manifest.status, "failed");
  EXPECT_NE(out.manifest.error.find("UnknownSuite"), std::string::npos);
}

TEST_F(HarnessTest, CouplingAndRecursionOutputs) {
  cli::CouplingOptions c;
  c.horizon = 3000;
  c.reps = 2;
  const auto co = run("coupling", c.to_json());
  ASSERT_NE(co.exit_code, cli::kExitUsage) << err_.str();
  const auto rows = CsvTable::parse(read_text(co.dir / "coupling.csv"));
  EXPECT_EQ(rows.rows.size(), 6000u);
  const auto side = nlohmann::json::parse(read_text(co.dir / "coupling.json"));
  EXPECT_DOUBLE_EQ(side["config"]["eps"].get<double>(), 0.0625);
  EXPECT_EQ(side["result"]["early"]["epochs"].get<int>() + side["result"]["late"]["epochs"].get<int>(), 6000);

  cli::RecursionOptions r;
  r.horizon = 2000;
  r.form = "first-passage";
  const auto ro = run("recursion", r.to_json());
  EXPECT_EQ(ro.exit_code, cli::kExitOk) << err_.str();
  const auto side2 = nlohmann::json::parse(read_text(ro.dir / "recursion.json"));
  EXPECT_EQ(side2["result"]["first_passage_matches"], side2["result"]["rows"]);
}

TEST_F(HarnessTest, ThreeArmedDiagnosticsAreRejected) {
  cli::RecursionOptions r;
  r.gaps = {0.3, 0.5};
  const auto out = run("recursion", r.to_json());
  EXPECT_EQ(out.exit_code, cli::kExitUsage);
  EXPECT_NE(out.manifest.error.find("NotTwoArmed"), std::string::npos);
  cli::CouplingOptions c;
  c.gaps = {0.3, 0.5};
  EXPECT_THROW(c.validate(), Error);
}

TEST_F(HarnessTest, ConfigRoundTripsThroughJson) {
  cli::RatioFigureOptions o;
  o.algorithms = {Algorithm::TS};
  o.horizons = {10, 20};
  const auto back = cli::RatioFigureOptions::from_json(nlohmann::json::parse(o.to_json().dump()));
  EXPECT_EQ(back.to_json(), o.to_json());
  cli::CouplingOptions c;
  c.eps = 0.01;
  EXPECT_EQ(cli::CouplingOptions::from_json(c.to_json()).to_json(), c.to_json());
}

TEST(DesignStd, ExponentMapping) {
  EXPECT_DOUBLE_EQ(cli::design_std_for_exponent(-4.0, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(cli::design_std_for_exponent(-1.0, 1.5), 1.5);
  EXPECT_THROW(cli::design_std_for_exponent(0.0, 1.0), Error);
}

TEST(Svg, RendersWellFormedDocuments) {
  std::map<std::int64_t, std::uint64_t> bins{{3, 2}, {4, 5}};
  const auto bar = svg::bar_chart(bins, "a < b", "x");
  EXPECT_EQ(bar.rfind("<svg", 0), 0u);
  EXPECT_NE(bar.find("a &lt; b"), std::string::npos);
  EXPECT_NE(bar.find("</svg>"), std::string::npos);
  const auto line = svg::line_chart({{"s", {1, 2}, {0.5, 0.7}}}, "t", "x", "y", 1.0);
  EXPECT_NE(line.find("<polyline"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  const auto root = fs::temp_directory_path() / ("bandit_clt_cli_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const std::string out = " --out " + root.string();
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli("fig1 --reps 0" + out), 2);
  EXPECT_EQ(run_cli("fig1 --algo bogus" + out), 2);
  EXPECT_EQ(run_cli("nonsense"), 2);
  EXPECT_EQ(run_cli("verify --suites bogus" + out), 2);
  EXPECT_EQ(run_cli("coupling --gaps 0.3,0.5" + out), 2);
  EXPECT_EQ(run_cli("fig1 --reps 50 --horizon 200 --exponents -2,-3" + out), 0);
  EXPECT_EQ(run_cli("recursion --horizon 500 --form first-passage" + out), 0);
  EXPECT_EQ(run_cli("verify --suites appendix-lemmas" + out), 1);
  fs::remove_all(root);
}
