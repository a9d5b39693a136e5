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

#include <random>

#include "qrl/io.hpp"

namespace {

TEST(InstanceJson, RoundTripsBitExactly) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto inst = qrl::generate_instance(seed * 7919, 2 + static_cast<int>(seed % 8));
    const auto back = qrl::instance_from_json(qrl::instance_to_json(inst));
    EXPECT_EQ(back.n_cities, inst.n_cities);
    EXPECT_EQ(back.seed, inst.seed);
    EXPECT_EQ(back.weights, inst.weights);
    EXPECT_EQ(back.points, inst.points);
  }
}

TEST(InstanceJson, SeventeenSignificantDigitsAndSchema) {
  EXPECT_EQ(qrl::format_double(0.1), "0.10000000000000001");
  const auto j = nlohmann::json::parse(qrl::instance_to_json(qrl::generate_instance(53, 3)));
  EXPECT_EQ(j["n"], 3);
  EXPECT_EQ(j["seed"], 53);
  EXPECT_EQ(j["points"].size(), 3u);
  EXPECT_EQ(j["weights"].size(), 3u);
  EXPECT_EQ(j["weights"][0].size(), 3u);
}

TEST(InstanceJson, RejectsAsymmetricWeights) {
  EXPECT_THROW(qrl::instance_from_json(R"({"n":2,"seed":0,"weights":[[0,1],[2,0]]})"), qrl::InvalidArgument);
  EXPECT_THROW(qrl::instance_from_json(R"({"n":2,"seed":0,"weights":[[0,1]]})"), qrl::InvalidArgument);
  EXPECT_THROW(qrl::instance_from_json(R"({"n":2,"seed":0,"weights":[[0,-1],[-1,0]]})"), qrl::InvalidArgument);
}

TEST(QuboJson, SortedTriplesAndSameEnergies) {
  const auto q = qrl::build_tsp_qubo(qrl::generate_instance(53, 4));
  const auto text = qrl::qubo_to_json(q);
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j["n"], 9);
  std::pair<int, int> prev{-1, -1};
  for (const auto& t : j["quadratic"]) {
    const std::pair<int, int> ij{t[0].get<int>(), t[1].get<int>()};
    EXPECT_LT(ij.first, ij.second);
    EXPECT_LT(prev, ij);
    prev = ij;
  }
  const auto back = qrl::qubo_from_json(text);
  EXPECT_EQ(back.layout.m, 3);
  std::mt19937_64 eng(2);
  for (int i = 0; i < 50; ++i) {
    const auto bits = qrl::bitstring_from_index(eng() % 512, 9);
    EXPECT_EQ(qrl::qubo_energy(back, bits), qrl::qubo_energy(q, bits));
  }
}

TEST(QuboJson, RejectsOutOfRangeIndex) {
  EXPECT_THROW(qrl::qubo_from_json(R"({"n":2,"constant":0,"linear":[0,0],"quadratic":[[0,2,1.0]]})"),
               qrl::InvalidArgument);
}

TEST(ClassicalSolutionJson, Schema) {
  const auto j = nlohmann::json::parse(qrl::classical_solution_to_json({1, -1, 1}, 2.5, {0, 1}, -1.0));
  EXPECT_EQ(j["spins"], (std::vector<int>{1, -1, 1}));
  EXPECT_EQ(j["cut"], 2.5);
  EXPECT_EQ(j["bits"], "01");
  EXPECT_EQ(j["C1"], -1.0);
}

}  // namespace
