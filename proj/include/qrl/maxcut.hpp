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
 * QUBO -> MaxCut reduction with an auxiliary node, a low-rank SDP relaxation
 * of MaxCut, and Goemans-Williamson hyperplane rounding.
 *
 * QUBO variable v maps to graph node v + 1; node 0 is the auxiliary spin,
 * pinned to +1. With s_0 = +1 and s_i = 2 x_{i-1} - 1, every bitstring obeys
 *
 *   qubo_energy(x) + 2 * cut_value(s) == total_weight() + offset_c1
 *
 * so a maximum cut decodes to a QUBO minimiser. offset_c1 includes the QUBO's
 * own constant term so the identity holds for energies as qubo_energy reports them.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "qrl/encoding.hpp"
#include "qrl/error.hpp"
#include "qrl/rng.hpp"

namespace qrl {

struct MaxCutInstance {
  int n_nodes = 0;
  std::map<std::pair<int, int>, double> weights;  // keys i < j
  double offset_c1 = 0.0;

  double total_weight() const {
    double s = 0.0;
    for (const auto& [ij, w] : weights) s += w;
    return s;
  }

  void add(int i, int j, double w) {
    if (i > j) std::swap(i, j);
    weights[{i, j}] += w;
  }
};

using SpinAssignment = std::vector<int>;  // entries -1 / +1

/// Row i is the unit vector of node i.
struct SdpFactor {
  int n_nodes = 0;
  int rank = 0;
  std::vector<double> vectors;  // row-major n_nodes x rank
  double objective = 0.0;
  int iterations = 0;

  std::span<const double> row(int i) const {
    return {vectors.data() + static_cast<std::size_t>(i) * rank, static_cast<std::size_t>(rank)};
  }
};

inline MaxCutInstance qubo_to_maxcut(const QuboProblem& q) {
  MaxCutInstance g;
  g.n_nodes = q.n_vars + 1;
  double c1 = q.constant;
  for (const auto& [ij, qij] : q.quadratic) {
    if (qij == 0.0) continue;
    g.add(ij.first + 1, ij.second + 1, 0.25 * qij);
    g.add(0, ij.first + 1, 0.25 * qij);
    g.add(0, ij.second + 1, 0.25 * qij);
    c1 += 0.25 * qij;
  }
  for (int i = 0; i < q.n_vars; ++i) {
    const double c = q.linear[static_cast<std::size_t>(i)];
    if (c == 0.0) continue;
    g.add(0, i + 1, 0.5 * c);
    c1 += 0.5 * c;
  }
  g.offset_c1 = c1;
  return g;
}

inline double cut_value(const MaxCutInstance& g, const SpinAssignment& spins) {
  if (static_cast<int>(spins.size()) != g.n_nodes)
    throw InvalidArgument("cut_value: spin vector length does not match n_nodes");
  double cut = 0.0;
  for (const auto& [ij, w] : g.weights)
    if (spins[static_cast<std::size_t>(ij.first)] != spins[static_cast<std::size_t>(ij.second)]) cut += w;
  return cut;
}

/// s_0 = +1, s_{v+1} = 2 x_v - 1.
inline SpinAssignment spins_from_bits(const Bitstring& bits) {
  SpinAssignment s(bits.size() + 1, 1);
  for (std::size_t v = 0; v < bits.size(); ++v) s[v + 1] = bits[v] ? 1 : -1;
  return s;
}

/// x_v = (1 + s_{v+1}) / 2, i.e. x = 1 exactly for nodes on node 0's side.
inline Bitstring recover_bits(const SpinAssignment& spins) {
  if (spins.empty() || spins[0] != 1)
    throw InvalidArgument("recover_bits: auxiliary spin must be +1");
  Bitstring bits(spins.size() - 1);
  for (std::size_t v = 0; v + 1 < spins.size(); ++v) bits[v] = spins[v + 1] == 1;
  return bits;
}

/// ceil(sqrt(2 n)) + 1
inline int default_sdp_rank(int n_nodes) {
  return static_cast<int>(std::ceil(std::sqrt(2.0 * n_nodes))) + 1;
}

struct SdpOptions {
  int rank = 0;  // 0 = default_sdp_rank
  double tol = 1e-7;
  int max_iters = 2000;
  std::uint64_t seed = 0;
};

namespace detail {

struct Adjacency {
  std::vector<std::vector<std::pair<int, double>>> nbrs;
};

inline Adjacency adjacency(const MaxCutInstance& g) {
  Adjacency a;
  a.nbrs.resize(static_cast<std::size_t>(g.n_nodes));
  for (const auto& [ij, w] : g.weights) {
    a.nbrs[static_cast<std::size_t>(ij.first)].emplace_back(ij.second, w);
    a.nbrs[static_cast<std::size_t>(ij.second)].emplace_back(ij.first, w);
  }
  return a;
}

inline double dot(const double* a, const double* b, int k) {
  double s = 0.0;
  for (int d = 0; d < k; ++d) s += a[d] * b[d];
  return s;
}

/// sum_{i<j} w_ij (1 - <v_i, v_j>) / 2
inline double sdp_objective(const MaxCutInstance& g, const std::vector<double>& v, int k) {
  double f = 0.0;
  for (const auto& [ij, w] : g.weights)
    f += 0.5 * w * (1.0 - dot(&v[static_cast<std::size_t>(ij.first) * k], &v[static_cast<std::size_t>(ij.second) * k], k));
  return f;
}

inline void normalize_rows(std::vector<double>& v, int n, int k) {
  for (int i = 0; i < n; ++i) {
    double* r = &v[static_cast<std::size_t>(i) * k];
    const double norm = std::sqrt(dot(r, r, k));
    for (int d = 0; d < k; ++d) r[d] /= norm;
  }
}

}  // namespace detail

/**
 * Burer-Monteiro ascent on the MaxCut SDP: rows of V are unit vectors in
 * R^rank and are updated one at a time to their locally optimal direction.
 * Iteration stops once a full sweep gains less than `tol`.
 */
inline SdpFactor solve_sdp(const MaxCutInstance& g, const SdpOptions& opt = {}) {
  for (const auto& [ij, w] : g.weights)
    if (!std::isfinite(w)) throw InvalidArgument("solve_sdp: non-finite edge weight");
  const int n = g.n_nodes;
  const int k = opt.rank == 0 ? default_sdp_rank(n) : opt.rank;
  if (k < 2) throw InvalidArgument("solve_sdp: rank must be >= 2");

  SdpFactor out;
  out.n_nodes = n;
  out.rank = k;
  auto& v = out.vectors;
  v.resize(static_cast<std::size_t>(n) * k);
  Rng rng(opt.seed);
  for (auto& x : v) x = rng.normal();
  detail::normalize_rows(v, n, k);
  if (n == 0) return out;

  // Block coordinate ascent on the unit sphere: each row in turn is replaced by the
  // normalised direction that maximises the objective with all other rows held fixed.
  // Every sweep is monotone, so no step size or line search is needed.
  const auto adj = detail::adjacency(g);
  std::vector<double> target(static_cast<std::size_t>(k));
  double f = detail::sdp_objective(g, v, k);
  int it = 0;
  for (; it < opt.max_iters; ++it) {
    for (int i = 0; i < n; ++i) {
      std::fill(target.begin(), target.end(), 0.0);
      for (const auto& [j, w] : adj.nbrs[static_cast<std::size_t>(i)]) {
        const double* vj = &v[static_cast<std::size_t>(j) * k];
        for (int d = 0; d < k; ++d) target[static_cast<std::size_t>(d)] -= w * vj[d];
      }
      const double len = std::sqrt(detail::dot(target.data(), target.data(), k));
      if (len < 1e-300) continue;
      double* vi = &v[static_cast<std::size_t>(i) * k];
      for (int d = 0; d < k; ++d) vi[d] = target[static_cast<std::size_t>(d)] / len;
    }
    const double f_next = detail::sdp_objective(g, v, k);
    const double gain = f_next - f;
    f = f_next;
    if (gain < opt.tol) {
      ++it;
      break;
    }
  }
  out.objective = f;
  out.iterations = it;
  return out;
}

/// Best of `trials` random-hyperplane roundings, globally flipped so spins[0] == +1.
inline SpinAssignment gw_round(const SdpFactor& factor, const MaxCutInstance& g, int trials,
                               std::uint64_t seed) {
  if (trials < 1) throw InvalidArgument("gw_round: trials must be >= 1");
  if (factor.n_nodes != g.n_nodes) throw InvalidArgument("gw_round: factor/instance size mismatch");
  const int n = g.n_nodes;
  const int k = factor.rank;
  Rng rng(seed);
  std::vector<double> normal(static_cast<std::size_t>(k));
  SpinAssignment best;
  double best_cut = -std::numeric_limits<double>::infinity();
  SpinAssignment s(static_cast<std::size_t>(n));
  for (int t = 0; t < trials; ++t) {
    for (auto& x : normal) x = rng.normal();
    for (int i = 0; i < n; ++i)
      s[static_cast<std::size_t>(i)] =
          detail::dot(&factor.vectors[static_cast<std::size_t>(i) * k], normal.data(), k) >= 0.0 ? 1 : -1;
    const double c = cut_value(g, s);
    if (c > best_cut) {
      best_cut = c;
      best = s;
    }
  }
  if (!best.empty() && best[0] == -1)
    for (auto& x : best) x = -x;
  return best;
}

}  // namespace qrl
