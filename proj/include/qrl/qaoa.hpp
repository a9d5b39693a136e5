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
 * The four QAOA ansatz variants over the fixed-start TSP register:
 *
 *   X     |->^n start, transverse-field mixer
 *   WS    warm-started product state, modified warm-start mixer
 *   XY    W state per position block, ring XY mixer
 *   WSXY  warm-biased one-hot state per block, ring XY mixer
 *
 * All variants share the same (N-1)^2-qubit register and QUBO energy table.
 * Parameters are laid out as (gamma_1..gamma_p, beta_1..beta_p).
 */
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qrl/encoding.hpp"
#include "qrl/error.hpp"
#include "qrl/instances.hpp"
#include "qrl/maxcut.hpp"
#include "qrl/rng.hpp"
#include "qrl/statevec.hpp"

namespace qrl {

enum class Variant { X, WS, XY, WSXY };

inline constexpr std::array<Variant, 4> kAllVariants{Variant::X, Variant::WS, Variant::XY, Variant::WSXY};

inline std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::X: return "X";
    case Variant::WS: return "WS";
    case Variant::XY: return "XY";
    case Variant::WSXY: return "WSXY";
  }
  return "?";
}

inline Variant parse_variant(std::string_view s) {
  for (auto v : kAllVariants)
    if (to_string(v) == s) return v;
  throw InvalidArgument("unknown variant '" + std::string(s) + "'");
}

inline bool uses_warm_start(Variant v) { return v == Variant::WS || v == Variant::WSXY; }

/// Output of the classical Goemans-Williamson pass over the QUBO's MaxCut form.
struct WarmStart {
  SpinAssignment spins;
  Bitstring bits;
  double cut = 0.0;
  double sdp_objective = 0.0;
  bool bits_feasible = false;
};

struct AnsatzContext {
  QuboProblem qubo;
  std::shared_ptr<const std::vector<double>> energies;
  BlockLayout layout;
  std::optional<WarmStart> warm;
  std::optional<RelaxedBits> relaxed;
  std::vector<double> thetas;  // WS only

  int n_qubits() const { return qubo.n_vars; }
  std::span<const double> energy_span() const { return *energies; }
};

struct ContextOptions {
  double epsilon = kDefaultEpsilon;
  int gw_trials = 100;
  std::uint64_t seed = 0;
  std::optional<double> penalty_a;
  std::optional<double> penalty_b;
};

/// QUBO -> MaxCut -> low-rank SDP -> best-of-trials hyperplane rounding -> bits.
inline WarmStart goemans_williamson_warm_start(const QuboProblem& qubo, int gw_trials, std::uint64_t seed) {
  const auto graph = qubo_to_maxcut(qubo);
  SdpOptions sdp;
  sdp.seed = derive_seed({seed, 1});
  const auto factor = solve_sdp(graph, sdp);
  WarmStart w;
  w.spins = gw_round(factor, graph, gw_trials, derive_seed({seed, 2}));
  w.cut = cut_value(graph, w.spins);
  w.sdp_objective = factor.objective;
  w.bits = recover_bits(w.spins);
  w.bits_feasible = decode_bits(qubo.layout, w.bits).has_value();
  return w;
}

inline AnsatzContext prepare_context(const TspInstance& inst, Variant variant, const ContextOptions& opt) {
  if (!(opt.epsilon >= 0.0 && opt.epsilon <= 0.5)) throw InvalidArgument("prepare_context: epsilon must lie in [0, 0.5]");
  const double dp = default_penalty(inst);
  AnsatzContext ctx;
  ctx.qubo = build_tsp_qubo(inst, opt.penalty_a.value_or(dp), opt.penalty_b.value_or(dp));
  ctx.layout = ctx.qubo.layout;
  ctx.energies = std::make_shared<const std::vector<double>>(energy_table(ctx.qubo));
  if (uses_warm_start(variant)) {
    ctx.warm = goemans_williamson_warm_start(ctx.qubo, opt.gw_trials, opt.seed);
    ctx.relaxed = relax_bits(ctx.warm->bits, opt.epsilon);
    if (variant == Variant::WS) ctx.thetas = warm_start_angles(*ctx.relaxed);
  }
  return ctx;
}

inline AnsatzContext prepare_context(const TspInstance& inst, Variant variant, double epsilon, int gw_trials,
                                     std::uint64_t seed) {
  ContextOptions opt;
  opt.epsilon = epsilon;
  opt.gw_trials = gw_trials;
  opt.seed = seed;
  return prepare_context(inst, variant, opt);
}

inline StateVector initial_state(const AnsatzContext& ctx, Variant variant) {
  if (uses_warm_start(variant) && !ctx.relaxed)
    throw InvalidContext("initial_state: warm-start variant needs relaxed bits");
  switch (variant) {
    case Variant::X: return init_minus_all(ctx.n_qubits());
    case Variant::WS: return init_ws_product(*ctx.relaxed);
    case Variant::XY: return init_w_blocks(ctx.layout);
    case Variant::WSXY: return init_biased_onehot(ctx.layout, *ctx.relaxed);
  }
  throw InvalidContext("initial_state: unknown variant");
}

inline StateVector evolve(const AnsatzContext& ctx, Variant variant, std::span<const double> gammas,
                          std::span<const double> betas) {
  if (gammas.size() != betas.size() || gammas.empty())
    throw InvalidArgument("evolve: need equally many gammas and betas (at least one)");
  if (variant == Variant::WS && static_cast<int>(ctx.thetas.size()) != ctx.n_qubits())
    throw InvalidContext("evolve: WS variant needs one warm-start angle per qubit");
  StateVector s = initial_state(ctx, variant);
  const auto energies = ctx.energy_span();
  for (std::size_t l = 0; l < gammas.size(); ++l) {
    apply_diagonal_phase(s, energies, gammas[l]);
    switch (variant) {
      case Variant::X: apply_x_mixer(s, betas[l]); break;
      case Variant::WS: apply_ws_mixer(s, ctx.thetas, betas[l]); break;
      case Variant::XY:
      case Variant::WSXY: apply_xy_ring(s, ctx.layout, betas[l]); break;
    }
  }
  return s;
}

/// params = (gamma_1..gamma_p, beta_1..beta_p)
inline StateVector evolve(const AnsatzContext& ctx, Variant variant, std::span<const double> params) {
  if (params.size() % 2 != 0 || params.empty()) throw InvalidArgument("evolve: parameter vector must have length 2p");
  const std::size_t p = params.size() / 2;
  return evolve(ctx, variant, params.subspan(0, p), params.subspan(p, p));
}

/// <gamma, beta| H_C |gamma, beta>
inline double objective(const AnsatzContext& ctx, Variant variant, std::span<const double> params) {
  return expectation(evolve(ctx, variant, params), ctx.energy_span());
}

}  // namespace qrl
