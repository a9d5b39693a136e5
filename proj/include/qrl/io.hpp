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
 * JSON files for instances, QUBOs and classical MaxCut solutions.
 *
 * Instance and QUBO files print every float with 17 significant digits so a
 * file round-trips to the same doubles.
 */
#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "qrl/encoding.hpp"
#include "qrl/error.hpp"
#include "qrl/instances.hpp"
#include "qrl/maxcut.hpp"

namespace qrl {

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw InvalidArgument("cannot write " + path);
  f << text;
}

/// {"n": int, "seed": int, "points": [[x,y],...], "weights": [[...],...]}
inline std::string instance_to_json(const TspInstance& inst) {
  std::string s = "{\"n\": " + std::to_string(inst.n_cities) + ", \"seed\": " + std::to_string(inst.seed) +
                  ", \"points\": [";
  for (std::size_t i = 0; i < inst.points.size(); ++i) {
    if (i) s += ", ";
    s += "[" + format_double(inst.points[i][0]) + ", " + format_double(inst.points[i][1]) + "]";
  }
  s += "], \"weights\": [";
  for (int i = 0; i < inst.n_cities; ++i) {
    if (i) s += ", ";
    s += "[";
    for (int j = 0; j < inst.n_cities; ++j) {
      if (j) s += ", ";
      s += format_double(inst.weight(i, j));
    }
    s += "]";
  }
  s += "]}\n";
  return s;
}

inline TspInstance instance_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  TspInstance inst;
  inst.n_cities = j.at("n").get<int>();
  inst.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("points"))
    for (const auto& p : j.at("points")) inst.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  const auto& w = j.at("weights");
  if (static_cast<int>(w.size()) != inst.n_cities) throw InvalidArgument("instance JSON: weights has wrong row count");
  for (const auto& row : w) {
    if (static_cast<int>(row.size()) != inst.n_cities) throw InvalidArgument("instance JSON: ragged weights");
    for (const auto& x : row) inst.weights.push_back(x.get<double>());
  }
  validate_instance(inst);
  return inst;
}

/// {"n": int, "constant": f, "linear": [f,...], "quadratic": [[i,j,f],...]}, (i, j) ascending.
inline std::string qubo_to_json(const QuboProblem& q) {
  std::string s = "{\"n\": " + std::to_string(q.n_vars) + ", \"constant\": " + format_double(q.constant) +
                  ", \"linear\": [";
  for (std::size_t i = 0; i < q.linear.size(); ++i) {
    if (i) s += ", ";
    s += format_double(q.linear[i]);
  }
  s += "], \"quadratic\": [";
  bool first = true;
  for (const auto& [ij, w] : q.quadratic) {
    if (!first) s += ", ";
    first = false;
    s += "[" + std::to_string(ij.first) + ", " + std::to_string(ij.second) + ", " + format_double(w) + "]";
  }
  s += "]}\n";
  return s;
}

inline QuboProblem qubo_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  QuboProblem q = make_qubo(j.at("n").get<int>());
  q.constant = j.value("constant", 0.0);
  const auto& lin = j.at("linear");
  if (static_cast<int>(lin.size()) != q.n_vars) throw InvalidArgument("QUBO JSON: linear has wrong length");
  for (std::size_t i = 0; i < lin.size(); ++i) q.linear[i] = lin[i].get<double>();
  for (const auto& t : j.at("quadratic")) {
    const int a = t.at(0).get<int>();
    const int b = t.at(1).get<int>();
    if (a < 0 || b < 0 || a >= q.n_vars || b >= q.n_vars) throw InvalidArgument("QUBO JSON: index out of range");
    q.add(a, b, t.at(2).get<double>());
  }
  // A perfect-square variable count is read as an (N-1)^2 TSP register.
  int m = 0;
  while ((m + 1) * (m + 1) <= q.n_vars) ++m;
  if (m * m == q.n_vars) q.layout = BlockLayout{m};
  return q;
}

/// {"spins":[+-1,...], "cut": f, "bits": "0101...", "C1": f}
inline std::string classical_solution_to_json(const SpinAssignment& spins, double cut, const Bitstring& bits,
                                              double c1) {
  nlohmann::json j;
  j["spins"] = spins;
  j["cut"] = cut;
  j["bits"] = to_string(bits);
  j["C1"] = c1;
  return j.dump() + "\n";
}

}  // namespace qrl
