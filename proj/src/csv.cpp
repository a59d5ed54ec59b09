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

#include "apd/csv.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace apd {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* event_name(SimEvent::Kind k) {
  switch (k) {
    case SimEvent::Kind::kUpdate: return "update";
    case SimEvent::Kind::kSend: return "send";
    case SimEvent::Kind::kDeliver: return "deliver";
    case SimEvent::Kind::kDiscard: return "discard";
    case SimEvent::Kind::kUpload: return "upload";
    case SimEvent::Kind::kDualUpdate: return "dual";
  }
  return "?";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_trace_csv(const std::string& path, const RunTrace& trace) {
  std::ofstream out = open_out(path);
  out << "# seed=" << trace.seed << "\n";
  out << "# alpha=" << fmt(trace.alpha) << " beta=" << fmt(trace.beta)
      << " gamma=" << fmt(trace.gamma) << " rho=" << fmt(trace.rho) << "\n";
  out << "# qp=" << fmt(trace.qp) << " qd=" << fmt(trace.qd)
      << " N=" << trace.num_agents << " Mg=" << fmt(trace.mg)
      << " Lx=" << fmt(trace.lx) << " Dx=" << fmt(trace.dx)
      << " mu0_err_sq=" << fmt(trace.mu0_err_sq) << "\n";
  out << "t,k_t,cycles,fresh,err_x_reg,err_x_unreg,err_mu_reg,err_mu_unreg,"
         "max_g,dual_bound_sq,primal_bound,d_kt,bmax_xc_target,l2_xc_target,max_agent_bmax\n";
  for (const TraceRow& r : trace.rows) {
    out << r.t << ',' << r.k_t << ',' << r.cycles << ',' << r.fresh << ','
        << fmt(r.err_x_reg) << ',' << fmt(r.err_x_unreg) << ','
        << fmt(r.err_mu_reg) << ',' << fmt(r.err_mu_unreg) << ','
        << fmt(r.max_g) << ',' << fmt(r.dual_bound_sq) << ','
        << fmt(r.primal_bound) << ',' << fmt(r.d_kt) << ','
        << fmt(r.bmax_xc_target) << ',' << fmt(r.l2_xc_target) << ','
        << fmt(r.max_agent_bmax) << "\n";
  }
}

RunTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace: " + path);
  RunTrace trace;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string token;
      while (ss >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const double val = std::stod(token.substr(eq + 1));
        if (key == "seed") trace.seed = static_cast<std::uint64_t>(val);
        else if (key == "alpha") trace.alpha = val;
        else if (key == "beta") trace.beta = val;
        else if (key == "gamma") trace.gamma = val;
        else if (key == "rho") trace.rho = val;
        else if (key == "qp") trace.qp = val;
        else if (key == "qd") trace.qd = val;
        else if (key == "N") trace.num_agents = static_cast<int>(val);
        else if (key == "Mg") trace.mg = val;
        else if (key == "Lx") trace.lx = val;
        else if (key == "Dx") trace.dx = val;
        else if (key == "mu0_err_sq") trace.mu0_err_sq = val;
      }
      continue;
    }
    if (!header_seen) {  // column header
      header_seen = true;
      continue;
    }
    std::istringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    if (vals.size() < 15) {
      throw std::runtime_error("trace row with too few columns in " + path);
    }
    TraceRow r;
    r.t = static_cast<std::int64_t>(vals[0]);
    r.k_t = static_cast<Tick>(vals[1]);
    r.cycles = static_cast<int>(vals[2]);
    r.fresh = static_cast<int>(vals[3]);
    r.err_x_reg = vals[4];
    r.err_x_unreg = vals[5];
    r.err_mu_reg = vals[6];
    r.err_mu_unreg = vals[7];
    r.max_g = vals[8];
    r.dual_bound_sq = vals[9];
    r.primal_bound = vals[10];
    r.d_kt = vals[11];
    r.bmax_xc_target = vals[12];
    r.l2_xc_target = vals[13];
    r.max_agent_bmax = vals[14];
    trace.rows.push_back(r);
  }
  trace.rounds_run = static_cast<std::int64_t>(trace.rows.size());
  return trace;
}

void write_events_csv(const std::string& path, const RunTrace& trace) {
  std::ofstream out = open_out(path);
  out << "tick,round,kind,from,to,stamp\n";
  for (const SimEvent& e : trace.events) {
    out << e.tick << ',' << e.round << ',' << event_name(e.kind) << ','
        << e.from << ',' << e.to << ',' << e.stamp << "\n";
  }
}

void write_bound_report_csv(const std::string& path,
                            const BoundReport& report) {
  std::ofstream out = open_out(path);
  out << "t,measured,bound,slack,violated\n";
  for (const auto& r : report.rows) {
    out << r.t << ',' << fmt(r.measured) << ',' << fmt(r.bound) << ','
        << fmt(r.slack) << ',' << (r.violated ? 1 : 0) << "\n";
  }
}

void write_counterexample_csv(const std::string& path,
                              const CounterexampleTrace& trace,
                              const CounterexampleConfig& config) {
  std::ofstream out = open_out(path);
  out << "# alpha=" << fmt(config.alpha) << " beta=" << fmt(config.beta)
      << " gamma=" << fmt(config.gamma) << " rho=" << fmt(config.rho)
      << " outer=" << config.outer_iterations << "\n";
  out << "outer,x1,x2,mu\n";
  for (std::size_t i = 0; i < trace.x1.size(); ++i) {
    out << i + 1 << ',' << fmt(trace.x1[i]) << ',' << fmt(trace.x2[i]) << ','
        << fmt(trace.mu[i]) << "\n";
  }
}

void write_sweep_csv(const std::string& path,
                     const std::vector<FlowResult>& results) {
  std::ofstream out = open_out(path);
  out << "alpha,beta,gamma,rho,seed,converged,rounds,"
         "reg_gap_x,reg_gap_mu,max_g_saddle,violation_bound,"
         "final_err_x_reg,final_err_x_unreg,final_err_mu_reg,final_err_mu_unreg\n";
  for (const FlowResult& r : results) {
    out << fmt(r.alpha) << ',' << fmt(r.beta) << ',' << fmt(r.gamma) << ','
        << fmt(r.rho) << ',' << r.seed << ',' << (r.converged ? 1 : 0) << ','
        << r.rounds << ',' << fmt(r.reg_gap_x) << ',' << fmt(r.reg_gap_mu)
        << ',' << fmt(r.max_g_saddle) << ',' << fmt(r.violation_bound) << ','
        << fmt(r.final_err_x_reg) << ',' << fmt(r.final_err_x_unreg) << ','
        << fmt(r.final_err_mu_reg) << ',' << fmt(r.final_err_mu_unreg) << "\n";
  }
}

}  // namespace apd
