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

#ifndef APD_EXPERIMENTS_HPP_
#define APD_EXPERIMENTS_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "apd/bounds.hpp"
#include "apd/problem.hpp"
#include "apd/sim.hpp"
#include "apd/sync.hpp"

namespace apd {

// The 8-flow / 9-edge routing benchmark: f_i(x_i) = -delta_i log(1 + x_i),
// congestion cost c(x) = congestion_scale * x^T A^T A x with A the
// edge-flow incidence of the path table, capacities A x <= b, X = [0, cap]^8.
struct FlowRoutingConfig {
  int num_agents = 8;
  int num_edges = 9;
  std::vector<std::vector<int>> paths = {
      {1, 3, 6}, {4, 7, 8}, {2, 4, 7, 5}, {3, 4, 7},
      {1, 3, 6, 7, 5}, {2, 4, 9}, {5, 8, 9, 6}, {7, 4}};
  double edge_capacity = 10.0;
  double utility_weight = 100.0;       // delta_i
  double congestion_scale = 1.0 / 20;  // coefficient of x^T A^T A x
  double box_lo = 0.0;
  double box_up = 10.0;
  double slater_value = 0.5;           // xbar = slater_value * ones
  double f_lb = 0.0;                   // 0 => default -N*delta*log(1+box_up)
  // run parameters
  double alpha = 0.01;
  double beta = 0.01;
  double gamma = 0.0;  // 0 => 2/(lp + alpha)
  double rho = 0.0;    // 0 => 0.9 * rho0
  double p_update = 0.05;
  double p_edge = 0.05;
  int round_len_lo = 5;
  int round_len_hi = 100;
  std::uint64_t seed = 1;
  std::int64_t horizon_rounds = 500'000;
  double stop_tol = 1e-9;
  int stride = 1;
};

ProblemSpec build_flow_problem(const FlowRoutingConfig& config);
MatrixXd flow_adjacency(const FlowRoutingConfig& config);

// The two-mode scripted runner that lets the two agents disagree on the dual
// variable. All constants are configurable.
struct CounterexampleConfig {
  double alpha = 0.01;
  double beta = 0.01;
  double gamma = 0.002;
  double rho = 0.0003;
  int outer_iterations = 10;
  int mode1_iterations = 500;
  int mode2_iterations = 1500;
  double inner_tol = 1e-5;
  double dual_radius = 25.002;
  bool record_inner = false;  // keep every inner (x1,x2,mu) triple
};

struct CounterexampleTrace {
  // one entry per outer iteration: values at its end
  std::vector<double> x1, x2, mu;
  // full inner trace when record_inner
  std::vector<std::array<double, 3>> inner;
};

CounterexampleTrace run_counterexample(const CounterexampleConfig& config);

// One sweep entry of the flow experiment.
struct FlowResult {
  double alpha = 0, beta = 0, gamma = 0, rho = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  std::int64_t rounds = 0;
  double final_err_x_reg = 0;    // ||x^c - x_k||
  double final_err_x_unreg = 0;  // ||x^c - x*||
  double final_err_mu_reg = 0;
  double final_err_mu_unreg = 0;
  double reg_gap_x = 0;   // ||x_k - x*||
  double reg_gap_mu = 0;  // ||mu_k - mu*||
  double max_g_saddle = 0;  // max_j g_j(x_k)
  double violation_bound = 0;  // a priori per-constraint max
  RunTrace trace;
};

// Saddle references for one (alpha, beta); reused across seeds.
struct FlowRefs {
  SaddleEstimate reg;
  SaddleEstimate unreg;
  BoundsPack bounds;
  StepSizes steps;
};

FlowRefs compute_flow_refs(const ProblemSpec& p, const FlowRoutingConfig& c);

FlowResult run_flow_experiment(const FlowRoutingConfig& config);
FlowResult run_flow_experiment(const ProblemSpec& p,
                               const FlowRoutingConfig& config,
                               const FlowRefs& refs);

// The three standard (alpha, beta) settings with one seed.
std::vector<FlowResult> run_flow_sweep(const FlowRoutingConfig& base);

}  // namespace apd

#endif  // APD_EXPERIMENTS_HPP_
