// Copyright 2026 The QRL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Drives the qrl executable end to end through its file interfaces.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "qrl/harness.hpp"
#include "qrl/io.hpp"

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
  const std::string cmd = std::string(QRL_CLI_PATH) + " " + args + " 2>/dev/null >/dev/null";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("qrl_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, GenWritesTheSameInstanceAsTheLibrary) {
  ASSERT_EQ(run_cli("gen --seed 53 --cities 5 --out " + path("i.json")), 0);
  const auto inst = qrl::instance_from_json(qrl::read_text_file(path("i.json")));
  EXPECT_EQ(inst.weights, qrl::generate_instance(53, 5).weights);
  EXPECT_NE(run_cli("gen --seed 1 --cities 1 --out " + path("bad.json")), 0);
}

TEST_F(Cli, QuboThenSolveClassical) {
  ASSERT_EQ(run_cli("gen --seed 53 --cities 4 --out " + path("i.json")), 0);
  ASSERT_EQ(run_cli("qubo --instance " + path("i.json") + " --out " + path("q.json")), 0);
  ASSERT_EQ(run_cli("solve-classical --qubo " + path("q.json") + " --trials 50 --seed 9 --out " + path("s.json")), 0);
  const auto sol = nlohmann::json::parse(qrl::read_text_file(path("s.json")));
  const auto spins = sol["spins"].get<std::vector<int>>();
  ASSERT_EQ(spins.size(), 10u);
  EXPECT_EQ(spins[0], 1);
  const auto bits = sol["bits"].get<std::string>();
  EXPECT_EQ(bits.size(), 9u);
  const auto q = qrl::qubo_from_json(qrl::read_text_file(path("q.json")));
  const auto g = qrl::qubo_to_maxcut(q);
  EXPECT_NEAR(sol["cut"].get<double>(), qrl::cut_value(g, spins), 1e-12);
  EXPECT_NEAR(sol["C1"].get<double>(), g.offset_c1, 1e-12);
  EXPECT_EQ(bits, qrl::to_string(qrl::recover_bits(spins)));
}

TEST_F(Cli, BruteForceListsBothReversals) {
  ASSERT_EQ(run_cli("gen --seed 50 --cities 5 --out " + path("i.json")), 0);
  ASSERT_EQ(run_cli("brute-force --instance " + path("i.json") + " --out " + path("b.json")), 0);
  const auto j = nlohmann::json::parse(qrl::read_text_file(path("b.json")));
  const auto oracle = qrl::brute_force_optimal(qrl::generate_instance(50, 5));
  EXPECT_NEAR(j["optimal_cost"].get<double>(), oracle.optimal_cost, 1e-12);
  EXPECT_EQ(j["optimal_tours"].size(), oracle.optimal_tours.size());
  EXPECT_EQ(j["bits"][0].get<std::string>().size(), 16u);
}

TEST_F(Cli, RunThenReport) {
  qrl::write_text_file(path("cfg.json"),
                       R"({"instance_seeds":[53], "n_cities":4, "depths":[1], "n_inits":1, "shots":200})");
  ASSERT_EQ(run_cli("run --config " + path("cfg.json") + " --out-dir " + path("out") + " --parallel 2"), 0);
  const auto records = qrl::read_records_jsonl(path("out/records.jsonl"));
  EXPECT_EQ(records.size(), 4u);
  ASSERT_EQ(run_cli("report --in " + path("out") + " --out " + path("summary.csv") + " --plots " + path("plots")), 0);
  const auto csv = qrl::read_text_file(path("summary.csv"));
  EXPECT_NE(csv.find("variant,depth,mean_pct_true,std_pct_true,median_rank,n_instances"), std::string::npos);
  for (const char* v : {"\nX,1,", "\nWS,1,", "\nXY,1,", "\nWSXY,1,"}) EXPECT_NE(csv.find(v), std::string::npos) << v;
  EXPECT_TRUE(fs::exists(path("plots/instances.csv")));
  EXPECT_TRUE(fs::exists(path("plots/rank_table.md")));
}

TEST_F(Cli, RejectsMissingArguments) {
  EXPECT_NE(run_cli(""), 0);
  EXPECT_NE(run_cli("run"), 0);
  EXPECT_NE(run_cli("report --in " + path("nothing") + " --out " + path("x.csv")), 0);
}

}  // namespace
