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
 * Dense statevector simulator for the QAOA variants.
 *
 * Basis index k stores the amplitude of the state whose qubit q equals bit q
 * of k. All operators act in place.
 */
#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qrl/encoding.hpp"
#include "qrl/error.hpp"
#include "qrl/rng.hpp"

namespace qrl {

using Complex = std::complex<double>;

struct StateVector {
  int n_qubits = 0;
  std::vector<Complex> amplitudes;

  std::size_t size() const { return amplitudes.size(); }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return s;
  }

  std::vector<double> probabilities() const {
    std::vector<double> p(amplitudes.size());
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::norm(amplitudes[k]);
    return p;
  }
};

/// Per-variable probability of reading 1, after epsilon regularisation.
struct RelaxedBits {
  std::vector<double> probs;
  double epsilon = 0.25;
};

inline constexpr double kDefaultEpsilon = 0.25;

inline void check_qubit_count(int n) {
  if (n < 0 || n > kMaxQubits) throw CapacityExceeded("statevector: qubit count outside [0, 24]");
}

inline StateVector zero_state(int n_qubits) {
  check_qubit_count(n_qubits);
  StateVector s;
  s.n_qubits = n_qubits;
  s.amplitudes.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
  return s;
}

inline StateVector basis_state(int n_qubits, std::uint64_t index) {
  StateVector s = zero_state(n_qubits);
  s.amplitudes.at(index) = 1.0;
  return s;
}

inline RelaxedBits relax_bits(const Bitstring& bits, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 0.5)) throw InvalidArgument("relax_bits: epsilon must lie in [0, 0.5]");
  RelaxedBits r;
  r.epsilon = epsilon;
  r.probs.resize(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) r.probs[i] = bits[i] ? 1.0 - epsilon : epsilon;
  return r;
}

/// theta = 2 asin(sqrt(c)) with c clamped into [epsilon, 1 - epsilon].
inline double clamp_relaxed(double c, double epsilon) {
  return std::clamp(c, epsilon, 1.0 - epsilon);
}

inline double warm_start_angle(double c, double epsilon) {
  return 2.0 * std::asin(std::sqrt(clamp_relaxed(c, epsilon)));
}

inline std::vector<double> warm_start_angles(const RelaxedBits& r) {
  std::vector<double> th(r.probs.size());
  for (std::size_t i = 0; i < th.size(); ++i) th[i] = warm_start_angle(r.probs[i], r.epsilon);
  return th;
}

/// |-> on every qubit.
inline StateVector init_minus_all(int n_qubits) {
  StateVector s = zero_state(n_qubits);
  const double a = 1.0 / std::sqrt(static_cast<double>(s.size()));
  for (std::size_t k = 0; k < s.size(); ++k) s.amplitudes[k] = (std::popcount(k) & 1) ? -a : a;
  return s;
}

/// Product of single-qubit states (cos(theta/2), sin(theta/2)).
inline StateVector init_product_ry(std::span<const double> thetas) {
  StateVector s = zero_state(static_cast<int>(thetas.size()));
  s.amplitudes[0] = 1.0;
  std::size_t filled = 1;
  for (std::size_t q = 0; q < thetas.size(); ++q) {
    const double c = std::cos(0.5 * thetas[q]);
    const double sn = std::sin(0.5 * thetas[q]);
    for (std::size_t k = 0; k < filled; ++k) {
      s.amplitudes[k + filled] = s.amplitudes[k] * sn;
      s.amplitudes[k] *= c;
    }
    filled <<= 1;
  }
  return s;
}

inline StateVector init_ws_product(const RelaxedBits& relaxed) {
  for (double p : relaxed.probs)
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("init_ws_product: probabilities must lie in [0, 1]");
  const auto th = warm_start_angles(relaxed);
  return init_product_ry(th);
}

namespace detail {

/// Tensor product over position blocks of sum_j block_amps[t][j] |e_j>.
inline StateVector one_hot_product(const BlockLayout& layout,
                                   const std::vector<std::vector<double>>& block_amps) {
  const int m = layout.m;
  StateVector s = zero_state(layout.n_qubits());
  if (m == 0) {
    s.amplitudes[0] = 1.0;
    return s;
  }
  std::vector<int> choice(static_cast<std::size_t>(m), 0);
  for (;;) {
    double amp = 1.0;
    std::uint64_t index = 0;
    for (int t = 0; t < m; ++t) {
      const int j = choice[static_cast<std::size_t>(t)];
      amp *= block_amps[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)];
      index |= std::uint64_t{1} << layout.qubit_index(j + 1, t + 1);
    }
    s.amplitudes[index] = amp;
    int t = 0;
    while (t < m && ++choice[static_cast<std::size_t>(t)] == m) choice[static_cast<std::size_t>(t++)] = 0;
    if (t == m) break;
  }
  return s;
}

}  // namespace detail

/// Equal superposition over one-hot-per-block states (a W state per block).
inline StateVector init_w_blocks(const BlockLayout& layout) {
  check_qubit_count(layout.n_qubits());
  const double a = std::sqrt(1.0 / layout.m);
  std::vector<std::vector<double>> amps(static_cast<std::size_t>(layout.m),
                                        std::vector<double>(static_cast<std::size_t>(layout.m), a));
  return detail::one_hot_product(layout, amps);
}

/// Block t gets amplitude sqrt(p_j / Z_t) on the one-hot state e_j, Z_t = sum_j p_j.
inline StateVector init_biased_onehot(const BlockLayout& layout, const RelaxedBits& relaxed) {
  check_qubit_count(layout.n_qubits());
  const int m = layout.m;
  if (static_cast<int>(relaxed.probs.size()) != layout.n_qubits())
    throw InvalidArgument("init_biased_onehot: probability vector does not match layout");
  std::vector<std::vector<double>> amps(static_cast<std::size_t>(m));
  for (int t = 1; t <= m; ++t) {
    auto& block = amps[static_cast<std::size_t>(t - 1)];
    double z = 0.0;
    for (int i = 1; i <= m; ++i) z += relaxed.probs[static_cast<std::size_t>(layout.qubit_index(i, t))];
    if (!(z > 0.0)) throw DegenerateBlock("init_biased_onehot: block " + std::to_string(t) + " has zero mass");
    block.resize(static_cast<std::size_t>(m));
    for (int i = 1; i <= m; ++i)
      block[static_cast<std::size_t>(i - 1)] =
          std::sqrt(relaxed.probs[static_cast<std::size_t>(layout.qubit_index(i, t))] / z);
  }
  return detail::one_hot_product(layout, amps);
}

/// amp_k *= exp(-i gamma (E_k - min E)); the shift is a global phase.
inline void apply_diagonal_phase(StateVector& s, std::span<const double> energies, double gamma) {
  if (energies.size() != s.size()) throw InvalidArgument("apply_diagonal_phase: energy table size mismatch");
  if (gamma == 0.0) return;
  const double e0 = *std::min_element(energies.begin(), energies.end());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double phi = -gamma * (energies[k] - e0);
    s.amplitudes[k] *= Complex{std::cos(phi), std::sin(phi)};
  }
}

/// Applies a 2x2 unitary [[u00, u01], [u10, u11]] to one qubit.
inline void apply_single_qubit(StateVector& s, int qubit, const std::array<Complex, 4>& u) {
  const std::size_t stride = std::size_t{1} << qubit;
  const std::size_t n = s.size();
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t k = base; k < base + stride; ++k) {
      const Complex a0 = s.amplitudes[k];
      const Complex a1 = s.amplitudes[k + stride];
      s.amplitudes[k] = u[0] * a0 + u[1] * a1;
      s.amplitudes[k + stride] = u[2] * a0 + u[3] * a1;
    }
  }
}

/// exp(-i beta X) on every qubit.
inline void apply_x_mixer(StateVector& s, double beta) {
  const Complex c{std::cos(beta), 0.0};
  const Complex ms{0.0, -std::sin(beta)};
  const std::array<Complex, 4> u{c, ms, ms, c};
  for (int q = 0; q < s.n_qubits; ++q) apply_single_qubit(s, q, u);
}

/// exp(-i beta (XX + YY)) on qubits a and b: rotates within span{|01>, |10>}.
inline void apply_xy_pair(StateVector& s, int qa, int qb, double beta) {
  const double c = std::cos(2.0 * beta);
  const double sn = std::sin(2.0 * beta);
  const std::size_t ma = std::size_t{1} << qa;
  const std::size_t mb = std::size_t{1} << qb;
  const std::size_t n = s.size();
  for (std::size_t k = 0; k < n; ++k) {
    if ((k & ma) || !(k & mb)) continue;  // visit each |..0_a..1_b..> once
    const std::size_t partner = k ^ ma ^ mb;
    const Complex x = s.amplitudes[k];
    const Complex y = s.amplitudes[partner];
    s.amplitudes[k] = c * x + Complex{0.0, -sn} * y;
    s.amplitudes[partner] = c * y + Complex{0.0, -sn} * x;
  }
}

/// City pairs coupled inside a position block, in application order:
/// (1,2), (2,3), ..., (m-1,m), (m,1). A two-city ring has a single edge.
inline std::vector<std::pair<int, int>> xy_ring_pairs(int m) {
  std::vector<std::pair<int, int>> pairs;
  if (m < 2) return pairs;
  for (int i = 1; i < m; ++i) pairs.emplace_back(i, i + 1);
  if (m > 2) pairs.emplace_back(m, 1);
  return pairs;
}

/// One Trotter step of the ring XY mixer in every position block.
inline void apply_xy_ring(StateVector& s, const BlockLayout& layout, double beta) {
  if (layout.n_qubits() != s.n_qubits) throw InvalidArgument("apply_xy_ring: layout does not match state");
  const auto pairs = xy_ring_pairs(layout.m);
  for (int t = 1; t <= layout.m; ++t)
    for (const auto& [i, j] : pairs) apply_xy_pair(s, layout.qubit_index(i, t), layout.qubit_index(j, t), beta);
}

inline std::array<Complex, 4> ry_matrix(double angle) {
  const double c = std::cos(0.5 * angle);
  const double sn = std::sin(0.5 * angle);
  return {Complex{c}, Complex{-sn}, Complex{sn}, Complex{c}};
}

inline std::array<Complex, 4> rz_matrix(double angle) {
  return {std::polar(1.0, -0.5 * angle), Complex{}, Complex{}, std::polar(1.0, 0.5 * angle)};
}

inline std::array<Complex, 4> matmul(const std::array<Complex, 4>& a, const std::array<Complex, 4>& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

/// Modified warm-start mixer on one qubit: R_Y(2 theta), then R_Z(-2 beta), then R_Y(-theta).
inline std::array<Complex, 4> ws_mixer_unitary(double theta, double beta) {
  return matmul(ry_matrix(-theta), matmul(rz_matrix(-2.0 * beta), ry_matrix(2.0 * theta)));
}

/// Single-qubit warm-start mixer Hamiltonian; R_Y(theta)|0> is its -1 eigenvector.
inline std::array<double, 4> ws_mixer_hamiltonian(double c) {
  const double off = -2.0 * std::sqrt(c * (1.0 - c));
  return {2.0 * c - 1.0, off, off, -2.0 * c + 1.0};
}

inline void apply_ws_mixer(StateVector& s, std::span<const double> thetas, double beta) {
  if (static_cast<int>(thetas.size()) != s.n_qubits) throw InvalidArgument("apply_ws_mixer: need one angle per qubit");
  for (int q = 0; q < s.n_qubits; ++q) apply_single_qubit(s, q, ws_mixer_unitary(thetas[static_cast<std::size_t>(q)], beta));
}

inline double expectation(const StateVector& s, std::span<const double> energies) {
  if (energies.size() != s.size()) throw InvalidArgument("expectation: energy table size mismatch");
  double e = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) e += std::norm(s.amplitudes[k]) * energies[k];
  return e;
}

/// True when basis index k has exactly one set qubit in every position block.
inline bool is_one_hot_index(const BlockLayout& layout, std::uint64_t k) {
  const std::uint64_t block_mask = (std::uint64_t{1} << layout.m) - 1;
  for (int t = 1; t <= layout.m; ++t)
    if (std::popcount((k >> layout.block_start(t)) & block_mask) != 1) return false;
  return true;
}

/// Probability mass on basis states that are not one-hot in every block.
inline double leakage(const StateVector& s, const BlockLayout& layout) {
  double out = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k)
    if (!is_one_hot_index(layout, k)) out += std::norm(s.amplitudes[k]);
  return out;
}

/// Measurement outcomes keyed by printed bitstring (qubit 0 first).
using SampleCounts = std::map<std::string, int>;

/**
 * Multinomial draw of `shots` outcomes from |amp|^2. Uniforms are sorted and
 * matched against the cumulative distribution in one sweep; probabilities are
 * rescaled by their sum, so tiny norm drift cannot drop shots.
 */
inline SampleCounts sample(const StateVector& s, int shots, std::uint64_t seed) {
  if (shots < 1) throw InvalidArgument("sample: shots must be >= 1");
  double total = 0.0;
  for (const auto& a : s.amplitudes) total += std::norm(a);
  Rng rng(seed);
  std::vector<double> u(static_cast<std::size_t>(shots));
  for (auto& x : u) x = rng.uniform() * total;
  std::sort(u.begin(), u.end());

  std::map<std::uint64_t, int> by_index;
  std::size_t k = 0;
  double cum = std::norm(s.amplitudes[0]);
  for (double x : u) {
    while (x >= cum && k + 1 < s.size()) {
      ++k;
      cum += std::norm(s.amplitudes[k]);
    }
    std::size_t idx = k;
    while (idx > 0 && std::norm(s.amplitudes[idx]) == 0.0) --idx;
    ++by_index[idx];
  }
  SampleCounts out;
  for (const auto& [idx, count] : by_index) out[to_string(bitstring_from_index(idx, s.n_qubits))] += count;
  return out;
}

/// Little-endian float64 (re, im) pairs, index order.
inline void write_state_binary(const StateVector& s, const std::string& path) {
  static_assert(std::endian::native == std::endian::little, "binary dump assumes a little-endian host");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("write_state_binary: cannot open " + path);
  f.write(reinterpret_cast<const char*>(s.amplitudes.data()),
          static_cast<std::streamsize>(s.amplitudes.size() * sizeof(Complex)));
}

}  // namespace qrl
