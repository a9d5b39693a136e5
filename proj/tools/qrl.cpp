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

// Command-line front end: instance generation, classical baselines, the
// experiment matrix runner, and report generation.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qrl/harness.hpp"
#include "qrl/io.hpp"
#include "qrl/maxcut.hpp"

namespace fs = std::filesystem;

namespace {

int cmd_gen(std::uint64_t seed, int cities, const std::string& out) {
  qrl::write_text_file(out, qrl::instance_to_json(qrl::generate_instance(seed, cities)));
  return 0;
}

int cmd_qubo(const std::string& instance_path, double penalty_a, double penalty_b, const std::string& out) {
  const auto inst = qrl::instance_from_json(qrl::read_text_file(instance_path));
  const double dp = qrl::default_penalty(inst);
  const auto q = qrl::build_tsp_qubo(inst, penalty_a > 0 ? penalty_a : dp, penalty_b > 0 ? penalty_b : dp);
  qrl::write_text_file(out, qrl::qubo_to_json(q));
  return 0;
}

int cmd_solve_classical(const std::string& qubo_path, int trials, std::uint64_t seed, const std::string& out) {
  const auto q = qrl::qubo_from_json(qrl::read_text_file(qubo_path));
  const auto g = qrl::qubo_to_maxcut(q);
  qrl::SdpOptions opt;
  opt.seed = qrl::derive_seed({seed, 1});
  const auto factor = qrl::solve_sdp(g, opt);
  const auto spins = qrl::gw_round(factor, g, trials, qrl::derive_seed({seed, 2}));
  qrl::write_text_file(out, qrl::classical_solution_to_json(spins, qrl::cut_value(g, spins),
                                                            qrl::recover_bits(spins), g.offset_c1));
  return 0;
}

int cmd_brute_force(const std::string& instance_path, const std::string& out) {
  const auto inst = qrl::instance_from_json(qrl::read_text_file(instance_path));
  const auto res = qrl::brute_force_optimal(inst);
  nlohmann::json j;
  j["optimal_cost"] = res.optimal_cost;
  j["optimal_tours"] = nlohmann::json::array();
  j["bits"] = nlohmann::json::array();
  const qrl::BlockLayout layout{inst.n_cities - 1};
  for (const auto& t : res.optimal_tours) {
    j["optimal_tours"].push_back(t.order);
    j["bits"].push_back(qrl::to_string(qrl::encode_tour(layout, t)));
  }
  const std::string text = j.dump(2) + "\n";
  if (out.empty() || out == "-")
    std::cout << text;
  else
    qrl::write_text_file(out, text);
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, int parallel) {
  const auto cfg = config_path.empty()
                       ? qrl::ExperimentConfig{}
                       : qrl::config_from_json(nlohmann::json::parse(qrl::read_text_file(config_path)));
  fs::create_directories(out_dir);
  qrl::write_text_file((fs::path(out_dir) / "config.json").string(), qrl::to_json(cfg).dump(2) + "\n");

  std::ofstream jsonl(fs::path(out_dir) / "records.jsonl", std::ios::trunc);
  if (!jsonl) throw qrl::InvalidArgument("cannot write records.jsonl in " + out_dir);
  int errors = 0;
  int done = 0;
  const std::size_t total = cfg.instance_seeds.size() * cfg.variants.size() * cfg.depths.size() *
                            static_cast<std::size_t>(cfg.n_inits);
  qrl::run_experiment(
      cfg,
      [&](const qrl::RunRecord& r) {
        jsonl << qrl::to_json(r).dump() << '\n';
        jsonl.flush();
        ++done;
        if (!r.ok) {
          ++errors;
          std::cerr << "error: seed " << r.instance_seed << " " << qrl::to_string(r.variant) << " p=" << r.depth
                    << " init " << r.init_index << ": " << r.error << '\n';
        }
        std::fprintf(stderr, "[%d/%zu] seed %llu %-4s p=%d init %d  pct_true %.1f  rank %s\n", done, total,
                     static_cast<unsigned long long>(r.instance_seed), std::string(qrl::to_string(r.variant)).c_str(),
                     r.depth, r.init_index, r.pct_true, qrl::render_rank(r.rank).c_str());
      },
      parallel);
  return errors == 0 ? 0 : 1;
}

int cmd_report(const std::string& in_dir, const std::string& out, const std::string& plots) {
  const auto records = qrl::read_records_jsonl((fs::path(in_dir) / "records.jsonl").string());
  const auto rows = qrl::aggregate(records);
  qrl::write_text_file(out, qrl::summary_csv(rows));
  if (!plots.empty()) {
    fs::create_directories(plots);
    qrl::write_text_file((fs::path(plots) / "instances.csv").string(), qrl::instance_points_csv(records));
    qrl::write_text_file((fs::path(plots) / "rank_table.md").string(), qrl::render_rank_table(records));
    std::string outliers = "variant,depth,instance_seed\n";
    for (const auto& r : rows)
      for (auto s : r.rank_outliers)
        outliers += std::string(qrl::to_string(r.variant)) + "," + std::to_string(r.depth) + "," +
                    std::to_string(s) + "\n";
    qrl::write_text_file((fs::path(plots) / "rank_outliers.csv").string(), outliers);
  }
  std::cout << qrl::summary_csv(rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Warm-started XY-mixer QAOA laboratory for small TSP instances"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  int cities = 5;
  std::string out;
  auto* gen = app.add_subcommand("gen", "Generate a seeded Euclidean TSP instance");
  gen->add_option("--seed", seed, "Instance seed")->required();
  gen->add_option("--cities", cities, "Number of cities (>= 2)")->required();
  gen->add_option("--out", out, "Output instance JSON")->required();

  std::string instance_path;
  double penalty_a = 0.0, penalty_b = 0.0;
  auto* qubo = app.add_subcommand("qubo", "Export the fixed-start TSP QUBO of an instance");
  qubo->add_option("--instance", instance_path, "Instance JSON")->required();
  qubo->add_option("--penalty-a", penalty_a, "City penalty (default N * max weight)");
  qubo->add_option("--penalty-b", penalty_b, "Position penalty (default N * max weight)");
  qubo->add_option("--out", out, "Output QUBO JSON")->required();

  std::string qubo_path;
  int trials = 100;
  auto* solve = app.add_subcommand("solve-classical", "QUBO -> MaxCut -> SDP + Goemans-Williamson rounding");
  solve->add_option("--qubo", qubo_path, "QUBO JSON")->required();
  solve->add_option("--trials", trials, "Hyperplane roundings")->check(CLI::PositiveNumber);
  solve->add_option("--seed", seed, "Seed");
  solve->add_option("--out", out, "Output solution JSON")->required();

  auto* brute = app.add_subcommand("brute-force", "Exhaustive optimal tours of an instance");
  brute->add_option("--instance", instance_path, "Instance JSON")->required();
  brute->add_option("--out", out, "Output JSON (stdout when omitted)");

  std::string config_path, out_dir;
  int parallel = 1;
  auto* run = app.add_subcommand("run", "Run the variant x instance x depth x init matrix");
  run->add_option("--config", config_path, "Experiment config JSON (defaults when omitted)");
  run->add_option("--out-dir", out_dir, "Directory for records.jsonl")->required();
  run->add_option("--parallel", parallel, "Worker threads (capped by QRL_THREADS)")->check(CLI::PositiveNumber);

  std::string in_dir, plots;
  auto* report = app.add_subcommand("report", "Aggregate records into summary CSV and plot data");
  report->add_option("--in", in_dir, "Directory holding records.jsonl")->required();
  report->add_option("--out", out, "Summary CSV path")->required();
  report->add_option("--plots", plots, "Directory for plot data");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(seed, cities, out);
    if (*qubo) return cmd_qubo(instance_path, penalty_a, penalty_b, out);
    if (*solve) return cmd_solve_classical(qubo_path, trials, seed, out);
    if (*brute) return cmd_brute_force(instance_path, out);
    if (*run) return cmd_run(config_path, out_dir, parallel);
    if (*report) return cmd_report(in_dir, out, plots);
  } catch (const std::exception& e) {
    std::cerr << "qrl: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
