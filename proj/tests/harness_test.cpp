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

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>

#include "qrl/harness.hpp"

namespace {

using qrl::RunRecord;
using qrl::Variant;

struct Fixture4 {
  qrl::TspInstance inst = qrl::generate_instance(53, 4);
  qrl::OracleResult oracle = qrl::brute_force_optimal(inst);
  qrl::BlockLayout layout{3};

  std::string optimal_bits(std::size_t which = 0) const {
    return qrl::to_string(qrl::encode_tour(layout, oracle.optimal_tours.at(which)));
  }
  std::string other_bits() const {
    for (const auto& t : std::vector<qrl::Tour>{{{1, 2, 3}}, {{1, 3, 2}}, {{2, 1, 3}}})
      if (!oracle.is_optimal(t)) return qrl::to_string(qrl::encode_tour(layout, t));
    return "000000000";
  }
};

RunRecord make_record(std::uint64_t seed, Variant v, int depth, int init, double objective, double pct,
                      std::optional<int> rank) {
  RunRecord r;
  r.instance_seed = seed;
  r.variant = v;
  r.depth = depth;
  r.init_index = init;
  r.best_objective = objective;
  r.pct_true = pct;
  r.rank = rank;
  return r;
}

TEST(ComputeMetrics, HalfOptimal) {
  Fixture4 f;
  const qrl::SampleCounts s{{f.optimal_bits(), 500}, {f.other_bits(), 500}};
  const auto m = qrl::compute_metrics(s, f.oracle, f.layout);
  EXPECT_DOUBLE_EQ(m.pct_true, 50.0);
  ASSERT_TRUE(m.rank.has_value());
  // Equal counts fall back to lexicographic order.
  EXPECT_EQ(*m.rank, f.optimal_bits() < f.other_bits() ? 1 : 2);
  EXPECT_EQ(m.optimal_count, 500);
}

TEST(ComputeMetrics, NeverSampledOptimumHasNoRank) {
  Fixture4 f;
  const qrl::SampleCounts s{{f.other_bits(), 990}, {"111000000", 10}};
  const auto m = qrl::compute_metrics(s, f.oracle, f.layout);
  EXPECT_EQ(m.pct_true, 0.0);
  EXPECT_FALSE(m.rank.has_value());
  EXPECT_EQ(qrl::render_rank(m.rank), "--");
}

TEST(ComputeMetrics, CountsEveryOptimalTourAndReportsBestRank) {
  Fixture4 f;
  ASSERT_GE(f.oracle.optimal_tours.size(), 2u);
  const qrl::SampleCounts s{{f.other_bits(), 600}, {f.optimal_bits(0), 100}, {f.optimal_bits(1), 300}};
  const auto m = qrl::compute_metrics(s, f.oracle, f.layout);
  EXPECT_DOUBLE_EQ(m.pct_true, 40.0);
  EXPECT_EQ(m.rank, 2);
  EXPECT_EQ(m.optimal_count, 400);
}

TEST(ComputeMetrics, RankElevenWithSeventeenHits) {
  Fixture4 f;
  qrl::SampleCounts s;
  // Ten infeasible strings, 983 shots between them, all above the optimum's 17.
  for (int i = 0; i < 10; ++i) s[qrl::to_string(qrl::bitstring_from_index(0b111000000 + i, 9))] = i == 0 ? 110 : 97;
  s[f.optimal_bits()] = 17;
  const auto m = qrl::compute_metrics(s, f.oracle, f.layout);
  EXPECT_EQ(m.rank, 11);
  EXPECT_EQ(m.optimal_count, 17);
  EXPECT_DOUBLE_EQ(m.pct_true, 1.7);
}

TEST(Aggregate, SingleRecord) {
  const auto rows = qrl::aggregate({make_record(50, Variant::WSXY, 2, 0, -1.0, 12.5, 3)});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].mean_pct_true, 12.5);
  EXPECT_EQ(rows[0].std_pct_true, 0.0);
  EXPECT_EQ(rows[0].median_rank, 3.0);
  EXPECT_EQ(rows[0].n_instances, 1);
}

TEST(Aggregate, PicksLowestObjectiveNotBestMetric) {
  const auto rows = qrl::aggregate({make_record(50, Variant::XY, 1, 0, 2.0, 90.0, 1),
                                    make_record(50, Variant::XY, 1, 1, 1.0, 10.0, 5)});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].mean_pct_true, 10.0);
  EXPECT_EQ(rows[0].median_rank, 5.0);
}

TEST(Aggregate, SkipsErroredRecords) {
  auto bad = make_record(50, Variant::XY, 1, 0, -100.0, 100.0, 1);
  bad.ok = false;
  const auto rows = qrl::aggregate({bad, make_record(50, Variant::XY, 1, 1, 1.0, 10.0, 5)});
  EXPECT_EQ(rows[0].mean_pct_true, 10.0);
  EXPECT_TRUE(qrl::aggregate({bad}).empty());
  EXPECT_TRUE(qrl::aggregate({}).empty());
}

TEST(Aggregate, OrderIndependentMeanStdAndOutliers) {
  std::vector<RunRecord> recs;
  const int ranks[] = {1, 2, 1, 3, 2, 40, 1, 2, 2, 1};
  for (int i = 0; i < 10; ++i) {
    recs.push_back(make_record(50 + i, Variant::WS, 1, 0, 1.0, 10.0 * i, ranks[i]));
    recs.push_back(make_record(50 + i, Variant::WS, 1, 1, 2.0, 99.0, 1));
  }
  recs.push_back(make_record(60, Variant::WS, 1, 0, 1.0, 0.0, std::nullopt));
  auto rows = qrl::aggregate(recs);
  std::mt19937_64 eng(1);
  std::shuffle(recs.begin(), recs.end(), eng);
  const auto rows2 = qrl::aggregate(recs);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].mean_pct_true, rows2[0].mean_pct_true);
  EXPECT_EQ(rows[0].std_pct_true, rows2[0].std_pct_true);
  EXPECT_NEAR(rows[0].mean_pct_true, 450.0 / 11.0, 1e-12);
  double ss = 0.0;
  for (int i = 0; i <= 10; ++i) {
    const double x = i < 10 ? 10.0 * i : 0.0;
    ss += (x - 450.0 / 11.0) * (x - 450.0 / 11.0);
  }
  EXPECT_NEAR(rows[0].std_pct_true, std::sqrt(ss / 11.0), 1e-12);
  EXPECT_EQ(rows[0].median_rank, 2.0);
  EXPECT_EQ(rows[0].rank_outliers, (std::vector<std::uint64_t>{55, 60}));
}

TEST(Aggregate, MedianRankUnsampledInMostInstancesRendersDashes) {
  const auto rows = qrl::aggregate({make_record(50, Variant::X, 1, 0, 1.0, 0.0, std::nullopt),
                                    make_record(51, Variant::X, 1, 0, 1.0, 0.0, std::nullopt),
                                    make_record(52, Variant::X, 1, 0, 1.0, 0.1, 700)});
  EXPECT_TRUE(std::isinf(rows[0].median_rank));
  EXPECT_NE(qrl::summary_csv(rows).find("X,1,0.033333,0.047140,--,3"), std::string::npos);
}

TEST(SummaryCsv, HeaderAndComment) {
  const auto csv = qrl::summary_csv({});
  EXPECT_EQ(csv.rfind("# ", 0), 0u);
  EXPECT_NE(csv.find("\nvariant,depth,mean_pct_true,std_pct_true,median_rank,n_instances\n"), std::string::npos);
}

TEST(RankTable, MissingRankRendersDashes) {
  auto r = make_record(54, Variant::WS, 2, 0, 1.0, 0.0, std::nullopt);
  auto w = make_record(54, Variant::WSXY, 2, 0, 1.0, 1.6, 9);
  w.optimal_count = 16;
  const auto table = qrl::render_rank_table({r, w});
  EXPECT_NE(table.find("|   54 |     2 | Pure Warm     |   -- |        -- |"), std::string::npos) << table;
  EXPECT_NE(table.find("|   54 |     2 | XY Warm-start |    9 |        16 |"), std::string::npos) << table;
  EXPECT_LT(table.find("XY Warm-start"), table.find("Pure Warm"));
}

TEST(RunRecordJson, RoundTripsIncludingNullRank) {
  auto r = make_record(53, Variant::WS, 3, 4, -2.5, 0.3, std::nullopt);
  r.samples = {{"0101", 3}};
  r.best_params = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  const auto j = qrl::to_json(r);
  EXPECT_TRUE(j["rank"].is_null());
  const auto back = qrl::record_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_FALSE(back.rank.has_value());
  EXPECT_EQ(back.samples, r.samples);
  EXPECT_EQ(back.best_params, r.best_params);
  EXPECT_EQ(back.variant, Variant::WS);
  EXPECT_EQ(back.init_index, 4);
}

TEST(ExperimentConfig, DefaultsAndJson) {
  const qrl::ExperimentConfig def;
  EXPECT_EQ(def.instance_seeds.size() * def.variants.size() * def.depths.size() * def.n_inits, 600u);
  EXPECT_EQ(def.instance_seeds.front(), 50u);
  EXPECT_EQ(def.instance_seeds.back(), 59u);
  EXPECT_EQ(def.shots, 1000);
  EXPECT_EQ(def.epsilon, 0.25);

  const auto c = qrl::config_from_json(nlohmann::json::parse(
      R"({"instance_seeds":[3], "variants":["XY","WSXY"], "depths":[2], "penalties":{"A": 4.0}})"));
  EXPECT_EQ(c.instance_seeds, (std::vector<std::uint64_t>{3}));
  EXPECT_EQ(c.variants, (std::vector<Variant>{Variant::XY, Variant::WSXY}));
  EXPECT_EQ(c.penalty_a, 4.0);
  EXPECT_FALSE(c.penalty_b.has_value());
  EXPECT_EQ(c.n_inits, 5);
  EXPECT_THROW(qrl::config_from_json(nlohmann::json::parse(R"({"depths":[]})")), qrl::InvalidArgument);
  EXPECT_THROW(qrl::config_from_json(nlohmann::json::parse(R"({"shots":0})")), qrl::InvalidArgument);
  EXPECT_EQ(qrl::config_from_json(qrl::to_json(c)).variants, c.variants);
  EXPECT_EQ(qrl::config_hash(c), qrl::config_hash(qrl::config_from_json(qrl::to_json(c))));
}

TEST(ResolveThreads, EnvCapsRequest) {
  ::setenv("QRL_THREADS", "2", 1);
  EXPECT_EQ(qrl::resolve_threads(8), 2);
  EXPECT_EQ(qrl::resolve_threads(1), 1);
  ::unsetenv("QRL_THREADS");
  EXPECT_EQ(qrl::resolve_threads(8), 8);
  EXPECT_EQ(qrl::resolve_threads(0), 1);
}

qrl::ExperimentConfig smoke_config() {
  qrl::ExperimentConfig c;
  c.instance_seeds = {53};
  c.n_cities = 4;
  c.depths = {1};
  c.n_inits = 1;
  return c;
}

TEST(RunExperiment, FourCitySmokeIsFastCompleteAndDeterministic) {
  const auto cfg = smoke_config();
  int seen = 0;
  const auto t0 = std::chrono::steady_clock::now();
  const auto a = qrl::run_experiment(cfg, [&](const RunRecord&) { ++seen; });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 60.0);
  ASSERT_EQ(a.size(), 4u);
  EXPECT_EQ(seen, 4);
  for (const auto& r : a) {
    EXPECT_TRUE(r.ok) << r.error;
    int total = 0;
    for (const auto& [b, c] : r.samples) total += c;
    EXPECT_EQ(total, 1000);
    EXPECT_GE(r.pct_true, 0.0);
    EXPECT_LE(r.pct_true, 100.0);
    if (r.rank) {
      EXPECT_GE(*r.rank, 1);
    }
    EXPECT_EQ(r.metadata["optimizer"], "nelder-mead");
    EXPECT_LE(r.evaluations, cfg.evals_per_layer);
  }
  const auto b = qrl::run_experiment(cfg, {}, 2);
  ASSERT_EQ(b.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(qrl::to_json(a[i]), qrl::to_json(b[i]));
}

TEST(RunExperiment, XyVariantsOnlySampleOneHotStrings) {
  auto cfg = smoke_config();
  cfg.variants = {Variant::XY, Variant::WSXY};
  for (const auto& r : qrl::run_experiment(cfg))
    for (const auto& [bits, c] : r.samples)
      EXPECT_TRUE(qrl::is_one_hot_index(qrl::BlockLayout{3}, qrl::index_from_bitstring(qrl::bitstring_from_string(bits))));
}

}  // namespace
