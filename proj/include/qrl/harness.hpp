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
 * Experiment matrix runner, sampling metrics and summary aggregation.
 *
 * A cell is (instance seed, variant, depth, init index). Every random stream
 * in a cell is seeded from a hash of its coordinates and the master seed, so
 * results do not depend on scheduling. The warm start of an instance is
 * shared by WS and WSXY.
 */
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "qrl/encoding.hpp"
#include "qrl/instances.hpp"
#include "qrl/io.hpp"
#include "qrl/optimize.hpp"
#include "qrl/qaoa.hpp"
#include "qrl/statevec.hpp"

namespace qrl {

inline constexpr const char* kSoftwareVersion = "0.1.0";
inline constexpr const char* kOptimizerName = "nelder-mead";

struct ExperimentConfig {
  std::vector<std::uint64_t> instance_seeds{50, 51, 52, 53, 54, 55, 56, 57, 58, 59};
  int n_cities = 5;
  std::vector<Variant> variants{kAllVariants.begin(), kAllVariants.end()};
  std::vector<int> depths{1, 2, 3};
  int n_inits = 5;
  int shots = 1000;
  double epsilon = kDefaultEpsilon;
  int gw_trials = 100;
  std::optional<double> penalty_a;
  std::optional<double> penalty_b;
  std::uint64_t master_seed = 0;
  int evals_per_layer = 300;
  double tol_abs = 1e-5;
  double initial_step = 0.1;

  void validate() const {
    if (instance_seeds.empty() || variants.empty() || depths.empty())
      throw InvalidArgument("config: seed, variant and depth lists must be non-empty");
    if (n_inits < 1 || shots < 1 || gw_trials < 1 || evals_per_layer < 1)
      throw InvalidArgument("config: n_inits, shots, gw_trials and evals_per_layer must be >= 1");
    for (int d : depths)
      if (d < 1) throw InvalidArgument("config: depths must be >= 1");
    if (!(epsilon >= 0.0 && epsilon <= 0.5)) throw InvalidArgument("config: epsilon must lie in [0, 0.5]");
    if (n_cities < 2 || n_cities > kMaxBruteForceCities) throw InvalidArgument("config: n_cities out of range");
    if ((n_cities - 1) * (n_cities - 1) > kMaxQubits) throw InvalidArgument("config: register exceeds 24 qubits");
  }
};

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["instance_seeds"] = c.instance_seeds;
  j["n_cities"] = c.n_cities;
  std::vector<std::string> vs;
  for (auto v : c.variants) vs.emplace_back(to_string(v));
  j["variants"] = vs;
  j["depths"] = c.depths;
  j["n_inits"] = c.n_inits;
  j["shots"] = c.shots;
  j["epsilon"] = c.epsilon;
  j["gw_trials"] = c.gw_trials;
  if (c.penalty_a || c.penalty_b) {
    j["penalties"] = nlohmann::json::object();
    if (c.penalty_a) j["penalties"]["A"] = *c.penalty_a;
    if (c.penalty_b) j["penalties"]["B"] = *c.penalty_b;
  } else {
    j["penalties"] = nullptr;
  }
  j["master_seed"] = c.master_seed;
  j["evals_per_layer"] = c.evals_per_layer;
  j["tol_abs"] = c.tol_abs;
  j["initial_step"] = c.initial_step;
  return j;
}

/// Missing keys keep their defaults.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  if (j.contains("instance_seeds")) c.instance_seeds = j["instance_seeds"].get<std::vector<std::uint64_t>>();
  c.n_cities = j.value("n_cities", c.n_cities);
  if (j.contains("variants")) {
    c.variants.clear();
    for (const auto& v : j["variants"]) c.variants.push_back(parse_variant(v.get<std::string>()));
  }
  if (j.contains("depths")) c.depths = j["depths"].get<std::vector<int>>();
  c.n_inits = j.value("n_inits", c.n_inits);
  c.shots = j.value("shots", c.shots);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.gw_trials = j.value("gw_trials", c.gw_trials);
  if (j.contains("penalties") && j["penalties"].is_object()) {
    if (j["penalties"].contains("A")) c.penalty_a = j["penalties"]["A"].get<double>();
    if (j["penalties"].contains("B")) c.penalty_b = j["penalties"]["B"].get<double>();
  }
  c.master_seed = j.value("master_seed", c.master_seed);
  c.evals_per_layer = j.value("evals_per_layer", c.evals_per_layer);
  c.tol_abs = j.value("tol_abs", c.tol_abs);
  c.initial_step = j.value("initial_step", c.initial_step);
  c.validate();
  return c;
}

/// FNV-1a over the canonical JSON dump.
inline std::uint64_t config_hash(const ExperimentConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_json(c).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct Metrics {
  double pct_true = 0.0;
  std::optional<int> rank;
  int optimal_count = 0;
};

/**
 * pct_true is the share of shots that decode to an optimal tour. rank is the
 * best 1-based position of an optimal bitstring after sorting distinct
 * outcomes by count (descending), then bitstring (ascending).
 */
inline Metrics compute_metrics(const SampleCounts& samples, const OracleResult& oracle, const BlockLayout& layout) {
  Metrics m;
  std::vector<std::pair<std::string, int>> sorted(samples.begin(), samples.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  int shots = 0;
  for (std::size_t pos = 0; pos < sorted.size(); ++pos) {
    const auto& [bits, count] = sorted[pos];
    shots += count;
    const auto tour = decode_bits(layout, bitstring_from_string(bits));
    if (!tour || !oracle.is_optimal(*tour)) continue;
    m.optimal_count += count;
    if (!m.rank) m.rank = static_cast<int>(pos) + 1;
  }
  m.pct_true = shots > 0 ? 100.0 * m.optimal_count / shots : 0.0;
  return m;
}

inline std::string render_rank(const std::optional<int>& rank) {
  return rank ? std::to_string(*rank) : std::string("--");
}

struct RunRecord {
  std::uint64_t instance_seed = 0;
  Variant variant = Variant::X;
  int depth = 1;
  int init_index = 0;
  std::vector<double> initial_params;
  std::vector<double> best_params;
  double best_objective = 0.0;
  SampleCounts samples;
  double pct_true = 0.0;
  std::optional<int> rank;
  int optimal_count = 0;
  double optimal_cost = 0.0;
  int evaluations = 0;
  std::string optimizer_status;
  bool ok = true;
  std::string error;
  nlohmann::json metadata;

  auto key() const { return std::make_tuple(instance_seed, static_cast<int>(variant), depth, init_index); }
};

inline nlohmann::json to_json(const RunRecord& r) {
  nlohmann::json j;
  j["instance_seed"] = r.instance_seed;
  j["variant"] = to_string(r.variant);
  j["depth"] = r.depth;
  j["init_index"] = r.init_index;
  j["status"] = r.ok ? "ok" : "error";
  if (!r.ok) j["error"] = r.error;
  j["initial_params"] = r.initial_params;
  j["best_params"] = r.best_params;
  j["best_objective"] = r.best_objective;
  j["samples"] = r.samples;
  j["pct_true"] = r.pct_true;
  j["rank"] = r.rank ? nlohmann::json(*r.rank) : nlohmann::json(nullptr);
  j["optimal_count"] = r.optimal_count;
  j["optimal_cost"] = r.optimal_cost;
  j["evaluations"] = r.evaluations;
  j["optimizer_status"] = r.optimizer_status;
  j["metadata"] = r.metadata;
  return j;
}

inline RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  r.instance_seed = j.at("instance_seed").get<std::uint64_t>();
  r.variant = parse_variant(j.at("variant").get<std::string>());
  r.depth = j.at("depth").get<int>();
  r.init_index = j.at("init_index").get<int>();
  r.ok = j.value("status", std::string("ok")) == "ok";
  r.error = j.value("error", std::string());
  r.initial_params = j.value("initial_params", std::vector<double>{});
  r.best_params = j.value("best_params", std::vector<double>{});
  r.best_objective = j.value("best_objective", 0.0);
  r.samples = j.value("samples", SampleCounts{});
  r.pct_true = j.value("pct_true", 0.0);
  if (j.contains("rank") && !j["rank"].is_null()) r.rank = j["rank"].get<int>();
  r.optimal_count = j.value("optimal_count", 0);
  r.optimal_cost = j.value("optimal_cost", 0.0);
  r.evaluations = j.value("evaluations", 0);
  r.optimizer_status = j.value("optimizer_status", std::string());
  r.metadata = j.value("metadata", nlohmann::json::object());
  return r;
}

inline std::vector<RunRecord> read_records_jsonl(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot open " + path);
  std::vector<RunRecord> out;
  std::string line;
  while (std::getline(f, line))
    if (!line.empty()) out.push_back(record_from_json(nlohmann::json::parse(line)));
  return out;
}

/// Seeds of one instance's shared classical preprocessing.
inline std::uint64_t warm_start_seed(std::uint64_t master, std::uint64_t instance_seed) {
  return derive_seed({master, instance_seed, 0x6777});
}

/// Initial parameters depend on (instance, depth, init) only, so every variant starts from the same point.
inline std::uint64_t init_params_seed(std::uint64_t master, std::uint64_t instance_seed, int depth, int init) {
  return derive_seed({master, instance_seed, static_cast<std::uint64_t>(depth), static_cast<std::uint64_t>(init),
                      0x7061});
}

inline std::uint64_t shots_seed(std::uint64_t master, std::uint64_t instance_seed, Variant v, int depth, int init) {
  return derive_seed({master, instance_seed, static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(depth),
                      static_cast<std::uint64_t>(init), 0x7368});
}

struct InstanceData {
  TspInstance instance;
  OracleResult oracle;
};

/// Runs one cell against a prepared context. Never throws; failures are recorded on the result.
inline RunRecord run_cell(const ExperimentConfig& cfg, const InstanceData& data, const AnsatzContext& ctx,
                          Variant variant, int depth, int init) {
  RunRecord r;
  r.instance_seed = data.instance.seed;
  r.variant = variant;
  r.depth = depth;
  r.init_index = init;
  r.optimal_cost = data.oracle.optimal_cost;
  r.metadata = {{"optimizer", kOptimizerName},
                {"penalty_A", ctx.qubo.penalty_a},
                {"penalty_B", ctx.qubo.penalty_b},
                {"software_version", kSoftwareVersion},
                {"config_hash", config_hash(cfg)},
                {"master_seed", cfg.master_seed},
                {"epsilon", cfg.epsilon},
                {"shots", cfg.shots},
                {"n_qubits", ctx.n_qubits()},
                {"param_layout", "gamma_1..gamma_p,beta_1..beta_p"}};
  if (ctx.warm) {
    r.metadata["warm_start_bits"] = to_string(ctx.warm->bits);
    r.metadata["warm_start_cut"] = ctx.warm->cut;
    r.metadata["warm_start_feasible"] = ctx.warm->bits_feasible;
    r.metadata["ws_register"] = "qubo-diagonal, auxiliary node pinned";
  }
  try {
    r.initial_params = random_params(depth, init_params_seed(cfg.master_seed, data.instance.seed, depth, init));
    OptimizerConfig oc;
    oc.max_evals = cfg.evals_per_layer * depth;
    oc.tol_abs = cfg.tol_abs;
    oc.initial_step = cfg.initial_step;
    oc.seed = init_params_seed(cfg.master_seed, data.instance.seed, depth, init);
    const auto trace = minimize([&](std::span<const double> x) { return objective(ctx, variant, x); },
                                r.initial_params, oc);
    r.evaluations = static_cast<int>(trace.evaluations.size());
    r.optimizer_status = std::string(to_string(trace.status));
    if (trace.failed() || trace.best_params.empty()) throw std::runtime_error("optimizer hit a non-finite objective");
    r.best_params = trace.best_params;
    r.best_objective = trace.best_value;
    const auto state = evolve(ctx, variant, r.best_params);
    r.samples = sample(state, cfg.shots, shots_seed(cfg.master_seed, data.instance.seed, variant, depth, init));
    const auto m = compute_metrics(r.samples, data.oracle, ctx.layout);
    r.pct_true = m.pct_true;
    r.rank = m.rank;
    r.optimal_count = m.optimal_count;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
  }
  return r;
}

/// Worker count from the request, capped by QRL_THREADS when set.
inline int resolve_threads(int requested) {
  int n = std::max(1, requested);
  if (const char* env = std::getenv("QRL_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

using RecordSink = std::function<void(const RunRecord&)>;

/**
 * Runs the full (seed, variant, depth, init) matrix. `sink` sees each record
 * as soon as it completes (calls are serialised). The returned records are
 * in matrix order regardless of thread count.
 */
inline std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, const RecordSink& sink = {},
                                             int threads = 1) {
  cfg.validate();
  struct Prepared {
    InstanceData data;
    std::map<Variant, AnsatzContext> contexts;
  };
  std::vector<Prepared> prepared;
  for (auto seed : cfg.instance_seeds) {
    Prepared p;
    p.data.instance = generate_instance(seed, cfg.n_cities);
    p.data.oracle = brute_force_optimal(p.data.instance);
    ContextOptions co;
    co.epsilon = cfg.epsilon;
    co.gw_trials = cfg.gw_trials;
    co.seed = warm_start_seed(cfg.master_seed, seed);
    co.penalty_a = cfg.penalty_a;
    co.penalty_b = cfg.penalty_b;
    for (auto v : cfg.variants) p.contexts.emplace(v, prepare_context(p.data.instance, v, co));
    prepared.push_back(std::move(p));
  }

  struct Cell {
    std::size_t instance;
    Variant variant;
    int depth;
    int init;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < prepared.size(); ++i)
    for (auto v : cfg.variants)
      for (int d : cfg.depths)
        for (int k = 0; k < cfg.n_inits; ++k) cells.push_back({i, v, d, k});

  std::vector<RunRecord> out(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex sink_mu;
  auto worker = [&] {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      const auto& cell = cells[c];
      const auto& p = prepared[cell.instance];
      out[c] = run_cell(cfg, p.data, p.contexts.at(cell.variant), cell.variant, cell.depth, cell.init);
      if (sink) {
        std::lock_guard lock(sink_mu);
        sink(out[c]);
      }
    }
  };
  const int n_threads = std::min<int>(resolve_threads(threads), static_cast<int>(std::max<std::size_t>(1, cells.size())));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  return out;
}

struct SummaryRow {
  Variant variant = Variant::X;
  int depth = 1;
  double mean_pct_true = 0.0;
  double std_pct_true = 0.0;
  /// +inf when the optimum went unsampled in at least half the instances.
  double median_rank = 0.0;
  int n_instances = 0;
  std::vector<std::uint64_t> rank_outliers;
};

/// The record chosen for each (variant, depth, instance): lowest optimised objective, then lowest init index.
inline std::vector<RunRecord> best_init_records(const std::vector<RunRecord>& records) {
  std::map<std::tuple<int, int, std::uint64_t>, const RunRecord*> best;
  for (const auto& r : records) {
    if (!r.ok) continue;
    const auto key = std::make_tuple(static_cast<int>(r.variant), r.depth, r.instance_seed);
    auto it = best.find(key);
    if (it == best.end() || r.best_objective < it->second->best_objective ||
        (r.best_objective == it->second->best_objective && r.init_index < it->second->init_index))
      best[key] = &r;
  }
  std::vector<RunRecord> out;
  for (const auto& [k, r] : best) out.push_back(*r);
  return out;
}

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  const double a = v[n / 2 - 1];
  const double b = v[n / 2];
  return std::isinf(b) ? b : 0.5 * (a + b);
}

inline constexpr double kRankOutlierFactor = 10.0;

/**
 * Per (variant, depth): mean and population standard deviation of pct_true
 * over instances, median rank (unsampled optimum counts as +inf), and the
 * instances whose rank exceeds 10x that median.
 */
inline std::vector<SummaryRow> aggregate(const std::vector<RunRecord>& records) {
  std::map<std::pair<int, int>, std::vector<RunRecord>> cells;
  for (auto& r : best_init_records(records)) cells[{static_cast<int>(r.variant), r.depth}].push_back(r);

  std::vector<SummaryRow> rows;
  for (const auto& [key, recs] : cells) {
    SummaryRow row;
    row.variant = static_cast<Variant>(key.first);
    row.depth = key.second;
    row.n_instances = static_cast<int>(recs.size());
    double sum = 0.0;
    for (const auto& r : recs) sum += r.pct_true;
    row.mean_pct_true = sum / row.n_instances;
    double ss = 0.0;
    for (const auto& r : recs) ss += (r.pct_true - row.mean_pct_true) * (r.pct_true - row.mean_pct_true);
    row.std_pct_true = std::sqrt(ss / row.n_instances);
    std::vector<double> ranks;
    for (const auto& r : recs) ranks.push_back(r.rank ? *r.rank : std::numeric_limits<double>::infinity());
    row.median_rank = median(ranks);
    if (std::isfinite(row.median_rank))
      for (const auto& r : recs)
        if (!r.rank || *r.rank > kRankOutlierFactor * row.median_rank) row.rank_outliers.push_back(r.instance_seed);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string format_median_rank(double m) {
  if (!std::isfinite(m)) return "--";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", m);
  return buf;
}

inline std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string s =
      "# per instance: init with the lowest optimised objective; mean/std (population) over instances; "
      "median_rank counts an unsampled optimum as +inf and prints --\n"
      "variant,depth,mean_pct_true,std_pct_true,median_rank,n_instances\n";
  for (const auto& r : rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s,%d,%.6f,%.6f,%s,%d\n", std::string(to_string(r.variant)).c_str(), r.depth,
                  r.mean_pct_true, r.std_pct_true, format_median_rank(r.median_rank).c_str(), r.n_instances);
    s += buf;
  }
  return s;
}

/// One row per best-init record, for scatter/box plots.
inline std::string instance_points_csv(const std::vector<RunRecord>& records) {
  std::string s = "variant,depth,instance_seed,pct_true,rank,optimal_count,best_objective\n";
  for (const auto& r : best_init_records(records)) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s,%d,%llu,%.6f,%s,%d,%.17g\n", std::string(to_string(r.variant)).c_str(),
                  r.depth, static_cast<unsigned long long>(r.instance_seed), r.pct_true,
                  r.rank ? std::to_string(*r.rank).c_str() : "", r.optimal_count, r.best_objective);
    s += buf;
  }
  return s;
}

inline std::string approach_label(Variant v) {
  switch (v) {
    case Variant::X: return "X mixer";
    case Variant::WS: return "Pure Warm";
    case Variant::XY: return "Pure XY";
    case Variant::WSXY: return "XY Warm-start";
  }
  return "?";
}

/// Seed | Layer | Approach | Rank | Frequency, one row per best-init record. Missing ranks print "--".
inline std::string render_rank_table(const std::vector<RunRecord>& records) {
  auto best = best_init_records(records);
  const auto order = [](Variant v) {
    switch (v) {
      case Variant::WSXY: return 0;
      case Variant::XY: return 1;
      case Variant::WS: return 2;
      case Variant::X: return 3;
    }
    return 4;
  };
  std::sort(best.begin(), best.end(), [&](const RunRecord& a, const RunRecord& b) {
    return std::make_tuple(a.instance_seed, a.depth, order(a.variant)) <
           std::make_tuple(b.instance_seed, b.depth, order(b.variant));
  });
  std::string s = "| Seed | Layer | Approach      | Rank | Frequency |\n"
                  "|------|-------|---------------|------|-----------|\n";
  for (const auto& r : best) {
    char buf[160];
    const std::string freq = r.rank ? std::to_string(r.optimal_count) : "--";
    std::snprintf(buf, sizeof buf, "| %4llu | %5d | %-13s | %4s | %9s |\n",
                  static_cast<unsigned long long>(r.instance_seed), r.depth, approach_label(r.variant).c_str(),
                  render_rank(r.rank).c_str(), freq.c_str());
    s += buf;
  }
  return s;
}

}  // namespace qrl
