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

#ifndef APD_CSV_HPP_
#define APD_CSV_HPP_

#include <string>

#include "apd/analysis.hpp"
#include "apd/experiments.hpp"
#include "apd/sim.hpp"

namespace apd {

// Round-level trace CSV. '#' header lines carry the run constants
// (seed, alpha, beta, gamma, rho, qp, qd, N, Mg, Lx, Dx, mu0_err_sq) so a
// trace file is self-contained for bound replay.
void write_trace_csv(const std::string& path, const RunTrace& trace);
RunTrace read_trace_csv(const std::string& path);

// Event log, one row per event.
void write_events_csv(const std::string& path, const RunTrace& trace);

// BoundReport CSV: t, measured, bound, slack, violated.
void write_bound_report_csv(const std::string& path, const BoundReport& report);

// Counterexample outer-iteration CSV: iteration, x1, x2, mu.
void write_counterexample_csv(const std::string& path,
                              const CounterexampleTrace& trace,
                              const CounterexampleConfig& config);

// Sweep summary, one row per run.
void write_sweep_csv(const std::string& path,
                     const std::vector<FlowResult>& results);

}  // namespace apd

#endif  // APD_CSV_HPP_
