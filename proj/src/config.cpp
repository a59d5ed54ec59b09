// Copyright 2026 The apd Authors
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

#include "apd/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace apd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

ConfigFile ConfigFile::parse_string(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key");
    }
    cfg.values_[key] = value;
  }
  return cfg;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

bool ConfigFile::has(const std::string& key) const {
  return values_.count(key) > 0;
}

std::string ConfigFile::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw std::invalid_argument("config: missing key '" + key + "'");
  }
  return it->second;
}

double ConfigFile::get_double(const std::string& key) const {
  const std::string s = get_string(key);
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' is not a number: " +
                                s);
  }
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::int64_t ConfigFile::get_int(const std::string& key) const {
  const double v = get_double(key);
  const auto i = static_cast<std::int64_t>(v);
  if (static_cast<double>(i) != v) {
    throw std::invalid_argument("config: key '" + key + "' is not an integer");
  }
  return i;
}

std::int64_t ConfigFile::get_int(const std::string& key,
                                 std::int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::vector<double> ConfigFile::get_array(const std::string& key) const {
  std::istringstream ss(get_string(key));
  std::vector<double> out;
  std::string tok;
  while (ss >> tok) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw std::invalid_argument("config: key '" + key +
                                  "' has a non-numeric entry: " + tok);
    }
  }
  return out;
}

std::vector<std::string> ConfigFile::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) out.push_back(k);
  return out;
}

FlowRoutingConfig flow_config_from(const ConfigFile& cfg,
                                   FlowRoutingConfig base) {
  static const char* known[] = {
      "agents",       "edges",        "edge_capacity", "utility_weight",
      "congestion_scale", "box_lo",   "box_up",        "slater",
      "f_lb",         "alpha",        "beta",          "gamma",
      "rho",          "p_update",     "p_edge",        "round_len_lo",
      "round_len_hi", "seed",         "horizon",       "stop_tol",
      "stride"};
  for (const std::string& k : cfg.keys()) {
    if (k.rfind("path.", 0) == 0) continue;
    bool ok = false;
    for (const char* kk : known) ok = ok || k == kk;
    if (!ok) throw std::invalid_argument("config: unknown flow key '" + k + "'");
  }
  base.num_agents = static_cast<int>(cfg.get_int("agents", base.num_agents));
  base.num_edges = static_cast<int>(cfg.get_int("edges", base.num_edges));
  bool any_path = false;
  for (int i = 1; i <= base.num_agents; ++i) {
    if (cfg.has("path." + std::to_string(i))) {
      any_path = true;
      break;
    }
  }
  if (any_path) {
    base.paths.assign(base.num_agents, {});
    for (int i = 1; i <= base.num_agents; ++i) {
      const std::string key = "path." + std::to_string(i);
      if (!cfg.has(key)) {
        throw std::invalid_argument("config: missing '" + key + "'");
      }
      for (double e : cfg.get_array(key)) {
        base.paths[i - 1].push_back(static_cast<int>(e));
      }
    }
  }
  base.edge_capacity = cfg.get_double("edge_capacity", base.edge_capacity);
  base.utility_weight = cfg.get_double("utility_weight", base.utility_weight);
  base.congestion_scale =
      cfg.get_double("congestion_scale", base.congestion_scale);
  base.box_lo = cfg.get_double("box_lo", base.box_lo);
  base.box_up = cfg.get_double("box_up", base.box_up);
  base.slater_value = cfg.get_double("slater", base.slater_value);
  base.f_lb = cfg.get_double("f_lb", base.f_lb);
  base.alpha = cfg.get_double("alpha", base.alpha);
  base.beta = cfg.get_double("beta", base.beta);
  base.gamma = cfg.get_double("gamma", base.gamma);
  base.rho = cfg.get_double("rho", base.rho);
  base.p_update = cfg.get_double("p_update", base.p_update);
  base.p_edge = cfg.get_double("p_edge", base.p_edge);
  base.round_len_lo =
      static_cast<int>(cfg.get_int("round_len_lo", base.round_len_lo));
  base.round_len_hi =
      static_cast<int>(cfg.get_int("round_len_hi", base.round_len_hi));
  base.seed = static_cast<std::uint64_t>(cfg.get_int("seed", base.seed));
  base.horizon_rounds = cfg.get_int("horizon", base.horizon_rounds);
  base.stop_tol = cfg.get_double("stop_tol", base.stop_tol);
  base.stride = static_cast<int>(cfg.get_int("stride", base.stride));
  return base;
}

CounterexampleConfig counterexample_config_from(const ConfigFile& cfg,
                                                CounterexampleConfig base) {
  static const char* known[] = {"alpha",  "beta",   "gamma", "rho",
                                "outer",  "mode1",  "mode2", "inner_tol",
                                "dual_radius"};
  for (const std::string& k : cfg.keys()) {
    bool ok = false;
    for (const char* kk : known) ok = ok || k == kk;
    if (!ok) {
      throw std::invalid_argument("config: unknown counterexample key '" + k +
                                  "'");
    }
  }
  base.alpha = cfg.get_double("alpha", base.alpha);
  base.beta = cfg.get_double("beta", base.beta);
  base.gamma = cfg.get_double("gamma", base.gamma);
  base.rho = cfg.get_double("rho", base.rho);
  base.outer_iterations =
      static_cast<int>(cfg.get_int("outer", base.outer_iterations));
  base.mode1_iterations =
      static_cast<int>(cfg.get_int("mode1", base.mode1_iterations));
  base.mode2_iterations =
      static_cast<int>(cfg.get_int("mode2", base.mode2_iterations));
  base.inner_tol = cfg.get_double("inner_tol", base.inner_tol);
  base.dual_radius = cfg.get_double("dual_radius", base.dual_radius);
  return base;
}

}  // namespace apd
