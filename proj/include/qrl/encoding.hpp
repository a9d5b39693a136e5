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
 * Fixed-start TSP as a QUBO, its energies, and bitstring decoding.
 *
 * Variable x_{i,t} (city i at tour position t, both 1-based over 1..m with
 * m = N-1) lives on qubit (t-1)*m + (i-1). Each contiguous run of m qubits is
 * therefore one tour position. Inside basis-state indices, bit q of the index
 * is qubit q; printed bitstrings show qubit 0 first.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qrl/error.hpp"
#include "qrl/instances.hpp"

namespace qrl {

/// Position-major one-hot layout for m cities over m positions.
struct BlockLayout {
  int m = 0;

  int n_qubits() const { return m * m; }
  /// city and position are 1-based.
  int qubit_index(int city, int position) const { return (position - 1) * m + (city - 1); }
  int block_start(int position) const { return (position - 1) * m; }
};

using Bitstring = std::vector<std::uint8_t>;

/// Renders qubit 0 as the leftmost character.
inline std::string to_string(const Bitstring& bits) {
  std::string s(bits.size(), '0');
  for (std::size_t q = 0; q < bits.size(); ++q)
    if (bits[q]) s[q] = '1';
  return s;
}

inline Bitstring bitstring_from_string(std::string_view s) {
  Bitstring bits(s.size());
  for (std::size_t q = 0; q < s.size(); ++q) {
    if (s[q] != '0' && s[q] != '1') throw InvalidArgument("bitstring must contain only 0/1");
    bits[q] = s[q] == '1';
  }
  return bits;
}

inline Bitstring bitstring_from_index(std::uint64_t index, int n) {
  Bitstring bits(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) bits[static_cast<std::size_t>(q)] = (index >> q) & 1U;
  return bits;
}

inline std::uint64_t index_from_bitstring(const Bitstring& bits) {
  std::uint64_t k = 0;
  for (std::size_t q = 0; q < bits.size(); ++q)
    if (bits[q]) k |= std::uint64_t{1} << q;
  return k;
}

/// Quadratic pseudo-boolean function: constant + linear.x + sum_{i<j} q_ij x_i x_j.
struct QuboProblem {
  int n_vars = 0;
  std::map<std::pair<int, int>, double> quadratic;  // keys i < j
  std::vector<double> linear;
  double constant = 0.0;
  double penalty_a = 0.0;
  double penalty_b = 0.0;
  BlockLayout layout;

  /// Accumulates coeff * x_i * x_j; i == j folds into the linear term since x^2 = x.
  void add(int i, int j, double coeff) {
    if (i == j) {
      linear[static_cast<std::size_t>(i)] += coeff;
      return;
    }
    if (i > j) std::swap(i, j);
    quadratic[{i, j}] += coeff;
  }
};

inline QuboProblem make_qubo(int n_vars) {
  QuboProblem q;
  q.n_vars = n_vars;
  q.linear.assign(static_cast<std::size_t>(n_vars), 0.0);
  return q;
}

/// A = B = N * max(W): one violated constraint outweighs any tour-length saving.
inline double default_penalty(const TspInstance& inst) {
  return static_cast<double>(inst.n_cities) * inst.max_weight();
}

inline QuboProblem build_tsp_qubo(const TspInstance& inst, double penalty_a, double penalty_b) {
  if (!(penalty_a > 0.0) || !(penalty_b > 0.0))
    throw InvalidArgument("build_tsp_qubo: penalties must be > 0");
  const int m = inst.n_cities - 1;
  if (m < 1) throw InvalidArgument("build_tsp_qubo: need at least 2 cities");
  const BlockLayout layout{m};
  QuboProblem q = make_qubo(m * m);
  q.layout = layout;
  q.penalty_a = penalty_a;
  q.penalty_b = penalty_b;

  // Tour length: consecutive positions plus the two depot legs.
  for (int t = 1; t <= m - 1; ++t)
    for (int i = 1; i <= m; ++i)
      for (int j = 1; j <= m; ++j)
        if (i != j)
          q.add(layout.qubit_index(i, t), layout.qubit_index(j, t + 1), inst.weight(i, j));
  for (int i = 1; i <= m; ++i) {
    q.add(layout.qubit_index(i, 1), layout.qubit_index(i, 1), inst.weight(0, i));
    q.add(layout.qubit_index(i, m), layout.qubit_index(i, m), inst.weight(0, i));
  }

  // (sum_k x_k - 1)^2 = -sum_k x_k + 2 sum_{k<l} x_k x_l + 1 for binary x.
  auto add_one_hot_penalty = [&](double weight, auto qubit_of) {
    for (int a = 1; a <= m; ++a) {
      for (int b = 1; b <= m; ++b) {
        q.add(qubit_of(a, b), qubit_of(a, b), -weight);
        for (int c = b + 1; c <= m; ++c) q.add(qubit_of(a, b), qubit_of(a, c), 2.0 * weight);
      }
      q.constant += weight;
    }
  };
  // Each city exactly once (sum over positions), each position exactly once (sum over cities).
  add_one_hot_penalty(penalty_a, [&](int city, int pos) { return layout.qubit_index(city, pos); });
  add_one_hot_penalty(penalty_b, [&](int pos, int city) { return layout.qubit_index(city, pos); });
  return q;
}

inline QuboProblem build_tsp_qubo(const TspInstance& inst) {
  const double p = default_penalty(inst);
  return build_tsp_qubo(inst, p, p);
}

inline double qubo_energy(const QuboProblem& q, const Bitstring& bits) {
  if (static_cast<int>(bits.size()) != q.n_vars)
    throw InvalidArgument("qubo_energy: bitstring length does not match n_vars");
  double e = q.constant;
  for (int i = 0; i < q.n_vars; ++i)
    if (bits[static_cast<std::size_t>(i)]) e += q.linear[static_cast<std::size_t>(i)];
  for (const auto& [ij, w] : q.quadratic)
    if (bits[static_cast<std::size_t>(ij.first)] && bits[static_cast<std::size_t>(ij.second)]) e += w;
  return e;
}

inline constexpr int kMaxQubits = 24;

/// Entry k is the energy of the basis state whose qubit q equals bit q of k.
inline std::vector<double> energy_table(const QuboProblem& q) {
  if (q.n_vars > kMaxQubits) throw CapacityExceeded("energy_table: more than 24 variables");
  const int n = q.n_vars;
  // Per-variable neighbour lists so each entry costs O(n + degree).
  std::vector<std::vector<std::pair<int, double>>> upper(static_cast<std::size_t>(n));
  for (const auto& [ij, w] : q.quadratic) upper[static_cast<std::size_t>(ij.first)].emplace_back(ij.second, w);

  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<double> table(size);
  for (std::uint64_t k = 0; k < size; ++k) {
    double e = q.constant;
    for (int i = 0; i < n; ++i) {
      if (!((k >> i) & 1U)) continue;
      e += q.linear[static_cast<std::size_t>(i)];
      for (const auto& [j, w] : upper[static_cast<std::size_t>(i)])
        if ((k >> j) & 1U) e += w;
    }
    table[k] = e;
  }
  return table;
}

/// Returns the tour when every position block is one-hot and every city is used once.
inline std::optional<Tour> decode_bits(const BlockLayout& layout, const Bitstring& bits) {
  const int m = layout.m;
  if (static_cast<int>(bits.size()) != m * m)
    throw InvalidArgument("decode_bits: bitstring length does not match layout");
  Tour tour;
  tour.order.reserve(static_cast<std::size_t>(m));
  std::vector<bool> used(static_cast<std::size_t>(m + 1), false);
  for (int t = 1; t <= m; ++t) {
    int city = 0;
    for (int i = 1; i <= m; ++i) {
      if (!bits[static_cast<std::size_t>(layout.qubit_index(i, t))]) continue;
      if (city != 0) return std::nullopt;
      city = i;
    }
    if (city == 0 || used[static_cast<std::size_t>(city)]) return std::nullopt;
    used[static_cast<std::size_t>(city)] = true;
    tour.order.push_back(city);
  }
  return tour;
}

inline Bitstring encode_tour(const BlockLayout& layout, const Tour& tour) {
  if (!is_valid_tour(layout.m + 1, tour)) throw InvalidArgument("encode_tour: tour does not match layout");
  Bitstring bits(static_cast<std::size_t>(layout.n_qubits()), 0);
  for (int t = 1; t <= layout.m; ++t)
    bits[static_cast<std::size_t>(layout.qubit_index(tour.order[static_cast<std::size_t>(t - 1)], t))] = 1;
  return bits;
}

}  // namespace qrl
