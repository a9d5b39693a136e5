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
 * Nelder-Mead simplex search for the variational outer loop.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <string_view>
#include <vector>

#include "qrl/error.hpp"
#include "qrl/rng.hpp"

namespace qrl {

struct OptimizerConfig {
  int max_evals = 300;     // hard cap, simplex initialisation included
  double initial_step = 0.1;
  double tol_abs = 1e-5;   // stop once f_worst - f_best < tol_abs
  std::uint64_t seed = 0;

  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

enum class OptStatus { Converged, BudgetExhausted, NonFiniteValue };

inline std::string_view to_string(OptStatus s) {
  switch (s) {
    case OptStatus::Converged: return "converged";
    case OptStatus::BudgetExhausted: return "budget";
    case OptStatus::NonFiniteValue: return "non-finite";
  }
  return "?";
}

struct Evaluation {
  std::vector<double> params;
  double value = 0.0;
};

struct OptTrace {
  std::vector<Evaluation> evaluations;
  std::vector<double> best_params;
  double best_value = std::numeric_limits<double>::infinity();
  OptStatus status = OptStatus::BudgetExhausted;
  int iterations = 0;

  bool failed() const { return status == OptStatus::NonFiniteValue; }
};

/// gamma_l uniform in [0, 2 pi), beta_l uniform in [0, pi).
inline std::vector<double> random_params(int depth, std::uint64_t seed) {
  if (depth < 1) throw InvalidArgument("random_params: depth must be >= 1");
  Rng rng(seed);
  std::vector<double> x(static_cast<std::size_t>(2 * depth));
  for (int l = 0; l < depth; ++l) x[static_cast<std::size_t>(l)] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  for (int l = 0; l < depth; ++l) x[static_cast<std::size_t>(depth + l)] = rng.uniform(0.0, std::numbers::pi);
  return x;
}

using Objective = std::function<double(std::span<const double>)>;

/**
 * Minimises `f` from `x0`. The initial simplex is x0 plus one vertex per
 * coordinate displaced by `initial_step`. Every call to `f` is recorded in
 * the trace, and no more than `max_evals` calls are made in total.
 */
inline OptTrace minimize(const Objective& f, std::span<const double> x0, const OptimizerConfig& cfg) {
  if (cfg.max_evals < 1) throw InvalidArgument("minimize: max_evals must be >= 1");
  if (!(cfg.tol_abs > 0.0)) throw InvalidArgument("minimize: tol_abs must be > 0");
  if (x0.empty()) throw InvalidArgument("minimize: empty starting point");

  const std::size_t dim = x0.size();
  OptTrace trace;

  // Returns false once the budget is spent or a non-finite value appears.
  auto eval = [&](const std::vector<double>& x, double& out) {
    if (static_cast<int>(trace.evaluations.size()) >= cfg.max_evals) {
      trace.status = OptStatus::BudgetExhausted;
      return false;
    }
    out = f(x);
    trace.evaluations.push_back({x, out});
    if (!std::isfinite(out)) {
      trace.status = OptStatus::NonFiniteValue;
      return false;
    }
    if (out < trace.best_value) {
      trace.best_value = out;
      trace.best_params = x;
    }
    return true;
  };

  std::vector<std::vector<double>> pts(dim + 1, std::vector<double>(x0.begin(), x0.end()));
  std::vector<double> vals(dim + 1);
  for (std::size_t i = 1; i <= dim; ++i) pts[i][i - 1] += cfg.initial_step;
  for (std::size_t i = 0; i <= dim; ++i)
    if (!eval(pts[i], vals[i])) return trace;

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim);
  auto along = [&](const std::vector<double>& from, const std::vector<double>& to, double t) {
    std::vector<double> p(dim);
    for (std::size_t d = 0; d < dim; ++d) p[d] = from[d] + t * (to[d] - from[d]);
    return p;
  };

  for (;;) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[dim - (dim > 0 ? 1 : 0)];
    if (vals[worst] - vals[best] < cfg.tol_abs) {
      trace.status = OptStatus::Converged;
      return trace;
    }
    ++trace.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t d = 0; d < dim; ++d) centroid[d] += pts[order[i]][d];
    for (auto& c : centroid) c /= static_cast<double>(dim);

    auto xr = along(centroid, pts[worst], -cfg.reflection);
    double fr = 0.0;
    if (!eval(xr, fr)) return trace;

    if (fr < vals[best]) {
      auto xe = along(centroid, xr, cfg.expansion);
      double fe = 0.0;
      if (!eval(xe, fe)) return trace;
      if (fe < fr) {
        pts[worst] = std::move(xe);
        vals[worst] = fe;
      } else {
        pts[worst] = std::move(xr);
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second_worst]) {
      pts[worst] = std::move(xr);
      vals[worst] = fr;
      continue;
    }

    const bool outside = fr < vals[worst];
    auto xc = outside ? along(centroid, xr, cfg.contraction) : along(centroid, pts[worst], cfg.contraction);
    double fc = 0.0;
    if (!eval(xc, fc)) return trace;
    if (outside ? fc <= fr : fc < vals[worst]) {
      pts[worst] = std::move(xc);
      vals[worst] = fc;
      continue;
    }

    for (std::size_t i = 1; i <= dim; ++i) {
      const std::size_t idx = order[i];
      pts[idx] = along(pts[best], pts[idx], cfg.shrink);
      if (!eval(pts[idx], vals[idx])) return trace;
    }
  }
}

}  // namespace qrl
