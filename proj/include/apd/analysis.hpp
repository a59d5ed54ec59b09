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

#ifndef APD_ANALYSIS_HPP_
#define APD_ANALYSIS_HPP_

#include <cstdint>
#include <vector>

#include "apd/problem.hpp"
#include "apd/sim.hpp"

namespace apd {

// |v|_bmax = max_i ||v_i||_2 over the blocks of the partition.
double block_max_norm(const VectorXd& v, const BlockPartition& partition);

// Same norm restricted to a subset of block indices.
double block_max_norm_subset(const VectorXd& v, const BlockPartition& partition,
                             const std::vector<int>& blocks);

// Per-round primal contraction estimate: q_p^c * D(k_t).
double primal_round_bound(int cycles, double d_kt, double qp);

// Constants feeding the dual rate bound.
struct RateConsts {
  double qd = 0.0;
  double qp = 0.0;
  int num_agents = 0;
  double mg = 0.0;
  double lx = 0.0;
  double dx = 0.0;
  double rho = 0.0;
};

// Dual-error bound after t+1 rounds given the cycle history c(0..t):
//   qd^{t+1} ||mu(0)-mu_k||^2
//   + sum_l qd^{t-l} (qd N Mg^2 Lx^2 qp^{2c(l)} + 2 sqrt(N) rho^2 Mg^2 Lx Dx qp^{c(l)}).
double dual_rate_bound(double mu0_err_sq, const std::vector<int>& cycles,
                       const RateConsts& c);

// One-round incremental form used by the simulator: bound(t+1) from bound-sum
// state. sum' = qd*sum + e(c_t); bound = qd^{t+1} mu0_err_sq + sum'.
double dual_rate_error_term(int cycles, const RateConsts& c);

// Primal bound on ||x^c_t - x_k||: qp^c sqrt(N) Lx + (Mg/alpha) * dual_err.
double primal_total_bound(int cycles, double dual_err, const RateConsts& c,
                          double alpha);

// Partial-aggregate round bound on ||x^c_t - xhat^t||:
// sqrt(N(t) qp^{2c} D(k_t)^2 + M(t) Lx^2).
double partial_round_bound(int fresh, int num_agents, int cycles, double d_kt,
                           double qp, double lx);

// Peak-to-peak amplitude of the first and last `window` entries.
// decaying iff amplitude_last < 0.5 * amplitude_first; a flat series (both
// amplitudes zero) is flagged degenerate and reported non-decaying.
struct OscillationReport {
  double amplitude_first = 0.0;
  double amplitude_last = 0.0;
  bool decaying = false;
  bool degenerate = false;
};
OscillationReport detect_oscillation(const std::vector<double>& series,
                                     int window);

// Per-round comparison of a measured quantity against its bound.
struct BoundReport {
  struct Row {
    std::int64_t t = 0;
    double measured = 0.0;
    double bound = 0.0;
    double slack = 0.0;
    bool violated = false;
  };
  std::vector<Row> rows;
  int violations = 0;
};

// Replays the dual and primal rate inequalities over a
// stored trace. Rows must be stored at stride 1 for the dual recurrence.
BoundReport check_dual_bound(const RunTrace& trace);
BoundReport check_primal_bound(const RunTrace& trace, double alpha);

}  // namespace apd

#endif  // APD_ANALYSIS_HPP_
