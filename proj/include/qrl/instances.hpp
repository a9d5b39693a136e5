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

/**
 * @file
 * Seeded Euclidean TSP instances and exhaustive tour enumeration.
 *
 * Cities are points drawn uniformly from the unit square by a
 * std::mt19937_64 stream seeded with the instance seed: city c takes the
 * draws 2c and 2c+1 as (x, y). Weights are Euclidean distances.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "qrl/error.hpp"
#include "qrl/rng.hpp"

namespace qrl {

/// Complete symmetric weighted graph over `n_cities` cities.
struct TspInstance {
  int n_cities = 0;
  std::uint64_t seed = 0;
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;  // row-major n x n

  double weight(int i, int j) const {
    return weights[static_cast<std::size_t>(i) * n_cities + j];
  }
  double max_weight() const {
    return weights.empty() ? 0.0 : *std::max_element(weights.begin(), weights.end());
  }
};

/// Visit order of cities 1..N-1; city 0 is the implicit start and end.
struct Tour {
  std::vector<int> order;

  friend bool operator==(const Tour&, const Tour&) = default;
  friend auto operator<=>(const Tour&, const Tour&) = default;
};

struct OracleResult {
  double optimal_cost = 0.0;
  std::vector<Tour> optimal_tours;  // lexicographically sorted

  bool is_optimal(const Tour& t) const {
    return std::binary_search(optimal_tours.begin(), optimal_tours.end(), t);
  }
};

inline constexpr int kMaxBruteForceCities = 10;
inline constexpr double kCostTolerance = 1e-9;

/// Checks weights for symmetry, zero diagonal, and finite non-negative entries.
inline void validate_instance(const TspInstance& inst) {
  const auto n = static_cast<std::size_t>(inst.n_cities);
  if (inst.n_cities < 2) throw InvalidArgument("instance needs at least 2 cities");
  if (inst.weights.size() != n * n) throw InvalidArgument("weight matrix has wrong size");
  for (int i = 0; i < inst.n_cities; ++i) {
    if (inst.weight(i, i) != 0.0) throw InvalidArgument("weight diagonal must be zero");
    for (int j = 0; j < inst.n_cities; ++j) {
      const double w = inst.weight(i, j);
      if (!std::isfinite(w) || w < 0.0) throw InvalidArgument("weights must be finite and >= 0");
      if (w != inst.weight(j, i)) throw InvalidArgument("weight matrix must be symmetric");
    }
  }
}

inline TspInstance generate_instance(std::uint64_t seed, int n_cities) {
  if (n_cities < 2) throw InvalidArgument("generate_instance: n_cities must be >= 2");
  TspInstance inst;
  inst.n_cities = n_cities;
  inst.seed = seed;
  Rng rng(seed);
  inst.points.resize(static_cast<std::size_t>(n_cities));
  for (auto& p : inst.points) {
    p[0] = rng.uniform();
    p[1] = rng.uniform();
  }
  const auto n = static_cast<std::size_t>(n_cities);
  inst.weights.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::hypot(inst.points[i][0] - inst.points[j][0],
                                  inst.points[i][1] - inst.points[j][1]);
      inst.weights[i * n + j] = d;
      inst.weights[j * n + i] = d;
    }
  }
  return inst;
}

inline bool is_valid_tour(int n_cities, const Tour& tour) {
  if (static_cast<int>(tour.order.size()) != n_cities - 1) return false;
  std::vector<bool> seen(static_cast<std::size_t>(n_cities), false);
  for (int c : tour.order) {
    if (c < 1 || c >= n_cities || seen[static_cast<std::size_t>(c)]) return false;
    seen[static_cast<std::size_t>(c)] = true;
  }
  return true;
}

inline double tour_cost(const TspInstance& inst, const Tour& tour) {
  if (!is_valid_tour(inst.n_cities, tour))
    throw InvalidArgument("tour_cost: tour is not a permutation of cities 1..N-1");
  double cost = inst.weight(0, tour.order.front());
  for (std::size_t k = 0; k + 1 < tour.order.size(); ++k)
    cost += inst.weight(tour.order[k], tour.order[k + 1]);
  cost += inst.weight(tour.order.back(), 0);
  return cost;
}

/// Enumerates all (N-1)! tours and keeps every one within kCostTolerance of the minimum.
inline OracleResult brute_force_optimal(const TspInstance& inst) {
  if (inst.n_cities > kMaxBruteForceCities)
    throw CapacityExceeded("brute_force_optimal: refusing more than 10 cities");
  Tour t;
  t.order.resize(static_cast<std::size_t>(inst.n_cities - 1));
  std::iota(t.order.begin(), t.order.end(), 1);

  std::vector<std::pair<double, Tour>> all;
  double best = std::numeric_limits<double>::infinity();
  do {
    const double c = tour_cost(inst, t);
    best = std::min(best, c);
    all.emplace_back(c, t);
  } while (std::next_permutation(t.order.begin(), t.order.end()));

  OracleResult out;
  out.optimal_cost = best;
  for (auto& [c, tour] : all)
    if (c <= best + kCostTolerance) out.optimal_tours.push_back(std::move(tour));
  return out;
}

}  // namespace qrl
