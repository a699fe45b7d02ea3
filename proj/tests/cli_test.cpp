// Copyright 2026 The cprepair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Runs the installed command-line binary as a subprocess and checks exit
// codes, output files and the config-file precedence rules.

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           ("cprepair_cli_" + std::to_string(::getpid()) + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Exit status of `cprepair <args>`, with stdout and stderr discarded.
  int run(const std::string& args, const std::string& env = "") const {
    const std::string cmd = env + " '" CPREPAIR_CLI_PATH "' " + args + " >" +
                            (dir_ / "stdout.txt").string() + " 2>" + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const fs::path& p) const {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  int count_lines(const fs::path& p) const {
    std::ifstream in(p);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) ++n;
    return n;
  }

  std::string out() const { return "--out '" + dir_.string() + "'"; }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("no-such-command"), 1);
  EXPECT_EQ(run("phase-diagram --nu-grid 2,1 " + out()), 1);
  EXPECT_EQ(run("phase-diagram --format xml " + out()), 1);
  EXPECT_EQ(run("repair --nu 0.5 " + out()), 1);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(CliTest, UnwritableOutputExitsOne) {
  EXPECT_EQ(run("repair --out /proc/cprepair-nonexistent"), 1);
  EXPECT_NE(read(dir_ / "stderr.txt").find("/proc/cprepair-nonexistent"), std::string::npos);
}

TEST_F(CliTest, PhaseDiagramWritesTableBoundaryAndSidecar) {
  ASSERT_EQ(run("phase-diagram --nu-grid 1,2 --r-grid 0,0.5 --plot-script " + out()), 0);
  const std::string table = read(dir_ / "phase_diagram.csv");
  EXPECT_EQ(table.substr(0, table.find('\n')), "nu,r,lambda_min,repair_trace");
  EXPECT_EQ(count_lines(dir_ / "phase_diagram.csv"), 5);
  EXPECT_TRUE(fs::exists(dir_ / "phase_boundary.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "phase_diagram_plot.py"));
  const json meta = json::parse(read(dir_ / "phase_diagram.meta.json"));
  EXPECT_EQ(meta["command"], "phase_diagram");
  EXPECT_TRUE(meta.contains("version"));
  EXPECT_EQ(meta["config"]["nu_grid"], json({1.0, 2.0}));
  EXPECT_TRUE(meta["tolerances"].contains("psd"));
}

TEST_F(CliTest, JsonFormat) {
  ASSERT_EQ(run("phase-diagram --nu-grid 1,2 --r-grid 0 --format json " + out()), 0);
  const json rows = json::parse(read(dir_ / "phase_diagram.json"));
  EXPECT_EQ(rows.size(), 2u);
  EXPECT_EQ(run("phase-diagram --nu-grid 1,2 --r-grid 0 --format json --plot-script " + out()), 1);
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  std::ofstream(dir_ / "run.ini") << "[phase-diagram]\nnu-grid=1,2,3\nr-grid=0,0.5\ngamma=2\n";
  const std::string cfg = "--config '" + (dir_ / "run.ini").string() + "' ";
  ASSERT_EQ(run(cfg + "phase-diagram " + out()), 0);
  EXPECT_EQ(count_lines(dir_ / "phase_diagram.csv"), 7);
  ASSERT_EQ(run(cfg + "phase-diagram --r-grid 0 " + out()), 0);
  EXPECT_EQ(count_lines(dir_ / "phase_diagram.csv"), 4);
  const json meta = json::parse(read(dir_ / "phase_diagram.meta.json"));
  EXPECT_EQ(meta["config"]["gamma"], 2.0);
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  const fs::path target = dir_ / "from_env";
  ASSERT_EQ(run("repair", "CPREPAIR_OUT_DIR='" + target.string() + "'"), 0);
  EXPECT_TRUE(fs::exists(target / "repair.json"));
  EXPECT_TRUE(fs::exists(target / "repair.meta.json"));
}

TEST_F(CliTest, WitnessReports) {
  ASSERT_EQ(run("witness --channel identity " + out()), 0);
  json w = json::parse(read(dir_ / "witness.json"));
  EXPECT_LT(w["mu_deviation"].get<double>(), 1e-12);
  ASSERT_EQ(run("witness --channel attenuator --time 0.2 " + out()), 0);
  w = json::parse(read(dir_ / "witness.json"));
  EXPECT_LT(w["mu_deviation"].get<double>(), 1e-12);
  ASSERT_EQ(run("witness --channel bayes --nu 1.2 --r 0.6 --time 1e-6 " + out()), 0);
  w = json::parse(read(dir_ / "witness.json"));
  EXPECT_LT(w["rate_error"].get<double>(), 1e-3);
}

TEST_F(CliTest, RepairReport) {
  ASSERT_EQ(run("repair --nu 1.2 --r 0.6 --weight identity " + out()), 0);
  const json r = json::parse(read(dir_ / "repair.json"));
  EXPECT_NEAR(r["cost"].get<double>(), r["closed_form_cost"].get<double>(), 1e-7);
}

TEST_F(CliTest, NoiseFloorDefectFreeClassExitsZero) {
  ASSERT_EQ(run("noise-floor --class 2:0,3:0.2 --s-grid 0.5,1 --steps 64 --plot-script " + out()), 0);
  std::ifstream in(dir_ / "noise_floor.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "S,neg2lnF_wc,bound,defect_flag");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(line.substr(line.find(',', line.find(',') + 1)), ",0,0");
  }
  EXPECT_EQ(rows, 2);
  EXPECT_TRUE(fs::exists(dir_ / "noise_floor_members.json"));
  EXPECT_TRUE(fs::exists(dir_ / "noise_floor_plot.py"));
}

TEST_F(CliTest, NoiseFloorExitStatusFollowsRows) {
  // Whatever the science says, exit 2 must coincide with a violated row.
  ASSERT_NE(run("noise-floor --class 1.5:0.8,1.2:1.0 --s-grid 0.5 --steps 64 " + out()), 1);
  const json detail = json::parse(read(dir_ / "noise_floor_members.json"));
  bool violated = false;
  for (const auto& row : detail) violated = violated || !row["satisfied"].get<bool>();
  EXPECT_EQ(run("noise-floor --class 1.5:0.8,1.2:1.0 --s-grid 0.5 --steps 64 " + out()),
            violated ? 2 : 0);
}

TEST_F(CliTest, SelfTestHookForcesViolation) {
  EXPECT_EQ(run("noise-floor --class 1.2:1.0 --s-grid 0.5 --steps 64 --selftest-negate-lhs " + out()), 2);
}

TEST_F(CliTest, NearPurityAbortNamesMember) {
  EXPECT_EQ(run("noise-floor --class 50:0,1.2:1.0 --s-grid 4 --steps 64 " + out()), 2);
  EXPECT_NE(read(dir_ / "stderr.txt").find("member 1"), std::string::npos);
}

}  // namespace
