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

#include "apd/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace apd {

double block_max_norm(const VectorXd& v, const BlockPartition& partition) {
  if (v.size() != partition.total) {
    throw std::invalid_argument("block_max_norm: dimension mismatch");
  }
  double best = 0.0;
  for (int i = 0; i < partition.agents(); ++i) {
    best = std::max(best, partition.block(v, i).norm());
  }
  return best;
}

double block_max_norm_subset(const VectorXd& v, const BlockPartition& partition,
                             const std::vector<int>& blocks) {
  double best = 0.0;
  for (int i : blocks) {
    best = std::max(best, partition.block(v, i).norm());
  }
  return best;
}

double primal_round_bound(int cycles, double d_kt, double qp) {
  if (cycles < 0 || d_kt < 0.0 || !(qp > 0.0 && qp < 1.0)) {
    throw std::invalid_argument("primal_round_bound: bad arguments");
  }
  return std::pow(qp, cycles) * d_kt;
}

double dual_rate_error_term(int cycles, const RateConsts& c) {
  const double qpc = std::pow(c.qp, cycles);
  const double n = static_cast<double>(c.num_agents);
  return c.qd * n * c.mg * c.mg * c.lx * c.lx * qpc * qpc +
         2.0 * std::sqrt(n) * c.rho * c.rho * c.mg * c.mg * c.lx * c.dx * qpc;
}

double dual_rate_bound(double mu0_err_sq, const std::vector<int>& cycles,
                       const RateConsts& c) {
  double bound = mu0_err_sq;
  for (int ct : cycles) {
    bound = c.qd * bound + dual_rate_error_term(ct, c);
  }
  return bound;
}

double primal_total_bound(int cycles, double dual_err, const RateConsts& c,
                          double alpha) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("primal_total_bound: alpha must be positive");
  }
  return std::pow(c.qp, cycles) * std::sqrt(static_cast<double>(c.num_agents)) *
             c.lx +
         c.mg / alpha * dual_err;
}

double partial_round_bound(int fresh, int num_agents, int cycles, double d_kt,
                           double qp, double lx) {
  if (fresh < 1 || fresh > num_agents) {
    throw std::invalid_argument("partial_round_bound: fresh outside [1, N]");
  }
  const double qpc = std::pow(qp, cycles);
  const double stale = static_cast<double>(num_agents - fresh);
  return std::sqrt(static_cast<double>(fresh) * qpc * qpc * d_kt * d_kt +
                   stale * lx * lx);
}

OscillationReport detect_oscillation(const std::vector<double>& series,
                                     int window) {
  if (window < 1 || static_cast<int>(series.size()) < 2 * window) {
    throw std::invalid_argument(
        "detect_oscillation: series shorter than two windows");
  }
  auto amplitude = [&](int begin) {
    double lo = series[begin], hi = series[begin];
    for (int i = begin; i < begin + window; ++i) {
      lo = std::min(lo, series[i]);
      hi = std::max(hi, series[i]);
    }
    return hi - lo;
  };
  OscillationReport r;
  r.amplitude_first = amplitude(0);
  r.amplitude_last = amplitude(static_cast<int>(series.size()) - window);
  r.degenerate = r.amplitude_first == 0.0 && r.amplitude_last == 0.0;
  r.decaying = !r.degenerate && r.amplitude_last < 0.5 * r.amplitude_first;
  return r;
}

BoundReport check_dual_bound(const RunTrace& trace) {
  BoundReport report;
  RateConsts c;
  c.qd = trace.qd;
  c.qp = trace.qp;
  c.num_agents = trace.num_agents;
  c.mg = trace.mg;
  c.lx = trace.lx;
  c.dx = trace.dx;
  c.rho = trace.rho;
  double bound = trace.mu0_err_sq;
  std::int64_t expect_t = 0;
  for (const TraceRow& row : trace.rows) {
    if (row.t != expect_t) {
      throw std::invalid_argument(
          "check_dual_bound: trace rows must be stored at stride 1");
    }
    ++expect_t;
    BoundReport::Row out;
    out.t = row.t;
    out.measured = row.err_mu_reg * row.err_mu_reg;
    out.bound = bound;
    out.slack = out.bound - out.measured;
    out.violated = out.measured > out.bound * (1.0 + 1e-9) + 1e-12;
    report.violations += out.violated ? 1 : 0;
    report.rows.push_back(out);
    bound = c.qd * bound + dual_rate_error_term(row.cycles, c);
  }
  return report;
}

BoundReport check_primal_bound(const RunTrace& trace, double alpha) {
  BoundReport report;
  RateConsts c;
  c.qp = trace.qp;
  c.num_agents = trace.num_agents;
  c.mg = trace.mg;
  c.lx = trace.lx;
  c.dx = trace.dx;
  c.rho = trace.rho;
  for (const TraceRow& row : trace.rows) {
    BoundReport::Row out;
    out.t = row.t;
    out.measured = row.err_x_reg;
    out.bound = primal_total_bound(row.cycles, row.err_mu_reg, c, alpha);
    out.slack = out.bound - out.measured;
    out.violated = out.measured > out.bound * (1.0 + 1e-9) + 1e-12;
    report.violations += out.violated ? 1 : 0;
    report.rows.push_back(out);
  }
  return report;
}

}  // namespace apd
