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

#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "apd/analysis.hpp"
#include "apd/config.hpp"
#include "apd/csv.hpp"
#include "apd/experiments.hpp"

namespace fs = std::filesystem;
using namespace apd;

namespace {

std::string run_tag(const FlowRoutingConfig& cfg) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "flow_a%g_b%g_s%llu", cfg.alpha, cfg.beta,
                static_cast<unsigned long long>(cfg.seed));
  return buf;
}

void print_flow_summary(const FlowResult& r) {
  std::printf(
      "alpha=%g beta=%g seed=%llu gamma=%g rho=%g\n"
      "  converged=%s rounds=%lld\n"
      "  saddle gap       |x_k - x*| = %.6g   |mu_k - mu*| = %.6g\n"
      "  final run errors |x^c-x_k| = %.4g  |x^c-x*| = %.6g  "
      "|mu-mu_k| = %.4g  |mu-mu*| = %.6g\n"
      "  max_j g_j(x_k) = %.6g  (a-priori bound %.6g)\n",
      r.alpha, r.beta, static_cast<unsigned long long>(r.seed), r.gamma, r.rho,
      r.converged ? "yes" : "NO", static_cast<long long>(r.rounds),
      r.reg_gap_x, r.reg_gap_mu, r.final_err_x_reg, r.final_err_x_unreg,
      r.final_err_mu_reg, r.final_err_mu_unreg, r.max_g_saddle,
      r.violation_bound);
}

FlowResult run_and_write_flow(const FlowRoutingConfig& cfg,
                              const std::string& out_dir, bool events) {
  FlowRoutingConfig c = cfg;
  if (events && c.horizon_rounds > 20'000) {
    throw std::invalid_argument(
        "flow: --events needs --horizon <= 20000 (event logs grow per tick)");
  }
  const ProblemSpec p = build_flow_problem(c);
  validate(p);
  const FlowRefs refs = compute_flow_refs(p, c);
  FlowResult r;
  if (events) {
    // rebuilt here so the trace carries the event log
    SimOptions opts;
    opts.max_rounds = c.horizon_rounds;
    opts.stop_tol = c.stop_tol;
    opts.stride = c.stride;
    opts.record_events = true;
    SaddleRefs sr;
    sr.x_reg = refs.reg.x;
    sr.mu_reg = refs.reg.mu;
    sr.x_unreg = refs.unreg.x;
    sr.mu_unreg = refs.unreg.mu;
    opts.refs = sr;
    ScheduleParams sp;
    sp.p_update = c.p_update;
    sp.p_edge = c.p_edge;
    sp.round_len_lo = c.round_len_lo;
    sp.round_len_hi = c.round_len_hi;
    sp.seed = c.seed;
    StreamSource src(p, sp);
    r.alpha = c.alpha;
    r.beta = c.beta;
    r.seed = c.seed;
    r.trace = run_async(p, RegParams{c.alpha, c.beta}, refs.steps, refs.bounds,
                        src, VectorXd::Zero(p.dim()),
                        VectorXd::Zero(p.num_constraints), opts);
    r.trace.seed = c.seed;
    r.gamma = refs.steps.gamma;
    r.rho = refs.steps.rho;
    r.converged = r.trace.converged;
    r.rounds = r.trace.rounds_run;
    r.reg_gap_x = (refs.reg.x - refs.unreg.x).norm();
    r.reg_gap_mu = (refs.reg.mu - refs.unreg.mu).norm();
    r.max_g_saddle = p.g_value(refs.reg.x).maxCoeff();
    const ErrorBounds eb =
        error_bounds(RegParams{c.alpha, c.beta}, refs.bounds);
    r.violation_bound = eb.violation.maxCoeff();
    const TraceRow& last = r.trace.rows.back();
    r.final_err_x_reg = last.err_x_reg;
    r.final_err_x_unreg = last.err_x_unreg;
    r.final_err_mu_reg = last.err_mu_reg;
    r.final_err_mu_unreg = last.err_mu_unreg;
  } else {
    r = run_flow_experiment(p, c, refs);
  }
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    const fs::path base = fs::path(out_dir) / run_tag(c);
    write_trace_csv(base.string() + ".csv", r.trace);
    std::printf("wrote %s.csv (%zu rows)\n", base.string().c_str(),
                r.trace.rows.size());
    if (events) {
      write_events_csv(base.string() + "_events.csv", r.trace);
      std::printf("wrote %s_events.csv (%zu events)\n", base.string().c_str(),
                  r.trace.events.size());
    }
  }
  print_flow_summary(r);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "apdsim: asynchronous cloud-assisted primal-dual optimization "
      "simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;

  // flow
  auto* flow = app.add_subcommand(
      "flow", "run the flow-routing benchmark once and export its trace");
  double alpha = 0.01, beta = -1.0;
  std::uint64_t seed = 1;
  std::int64_t horizon = 500'000;
  int stride = 1;
  double stop_tol = 1e-9;
  bool events = false;
  flow->add_option("--config", config_path, "key=value config file");
  flow->add_option("--alpha", alpha, "primal regularization weight");
  flow->add_option("--beta", beta, "dual regularization weight (default alpha)");
  flow->add_option("--seed", seed, "schedule seed");
  flow->add_option("--horizon", horizon, "maximum cloud rounds");
  flow->add_option("--stride", stride, "store every k-th round");
  flow->add_option("--stop-tol", stop_tol,
                   "stop once both saddle errors fall below this");
  flow->add_option("--out", out_dir, "output directory for CSV files");
  flow->add_flag("--events", events, "also export the per-event log");

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "run the three standard regularization settings");
  std::string sweep_config, sweep_out;
  std::uint64_t sweep_seed = 1;
  std::int64_t sweep_horizon = 500'000;
  int sweep_stride = 100;
  sweep->add_option("--config", sweep_config, "key=value config file");
  sweep->add_option("--seed", sweep_seed, "schedule seed");
  sweep->add_option("--horizon", sweep_horizon, "maximum cloud rounds");
  sweep->add_option("--stride", sweep_stride, "store every k-th round");
  sweep->add_option("--out", sweep_out, "output directory for CSV files");

  // counterexample
  auto* counter = app.add_subcommand(
      "counterexample",
      "run the scripted two-agent runner with desynchronized duals");
  std::string counter_config, counter_out;
  double counter_rho = -1.0;
  int counter_outer = -1;
  counter->add_option("--config", counter_config, "key=value config file");
  counter->add_option("--rho", counter_rho, "dual step size override");
  counter->add_option("--outer", counter_outer, "outer iterations override");
  counter->add_option("--out", counter_out, "output directory for CSV files");

  // bounds-check
  auto* bounds = app.add_subcommand(
      "bounds-check",
      "replay the dual and primal rate bounds over a stored trace");
  std::string trace_path, bounds_out;
  bounds->add_option("--trace", trace_path, "trace CSV written by flow/sweep")
      ->required();
  bounds->add_option("--out", bounds_out, "output directory for reports");

  CLI11_PARSE(app, argc, argv);

  try {
    if (flow->parsed()) {
      FlowRoutingConfig cfg;
      if (!config_path.empty()) {
        cfg = flow_config_from(ConfigFile::parse_file(config_path), cfg);
      }
      if (flow->count("--alpha")) {
        cfg.alpha = alpha;
        if (flow->count("--beta") == 0) cfg.beta = cfg.alpha;
      }
      if (flow->count("--beta")) cfg.beta = beta;
      if (flow->count("--seed")) cfg.seed = seed;
      if (flow->count("--horizon")) cfg.horizon_rounds = horizon;
      if (flow->count("--stride")) cfg.stride = stride;
      if (flow->count("--stop-tol")) cfg.stop_tol = stop_tol;
      const FlowResult r = run_and_write_flow(cfg, out_dir, events);
      return r.converged ? 0 : 1;
    }

    if (sweep->parsed()) {
      FlowRoutingConfig base;
      if (!sweep_config.empty()) {
        base = flow_config_from(ConfigFile::parse_file(sweep_config), base);
      }
      if (sweep->count("--seed")) base.seed = sweep_seed;
      if (sweep->count("--horizon")) base.horizon_rounds = sweep_horizon;
      base.stride = sweep_stride;
      std::vector<FlowResult> results;
      bool all_converged = true;
      for (double ab : {0.1, 0.01, 0.001}) {
        FlowRoutingConfig c = base;
        c.alpha = ab;
        c.beta = ab;
        c.gamma = 0.0;
        c.rho = 0.0;
        results.push_back(run_and_write_flow(c, sweep_out, false));
        all_converged = all_converged && results.back().converged;
        std::printf("\n");
      }
      if (!sweep_out.empty()) {
        fs::create_directories(sweep_out);
        const fs::path path = fs::path(sweep_out) / "sweep.csv";
        write_sweep_csv(path.string(), results);
        std::printf("wrote %s\n", path.string().c_str());
      }
      return all_converged ? 0 : 1;
    }

    if (counter->parsed()) {
      CounterexampleConfig cfg;
      if (!counter_config.empty()) {
        cfg = counterexample_config_from(ConfigFile::parse_file(counter_config),
                                         cfg);
      }
      if (counter->count("--rho")) cfg.rho = counter_rho;
      if (counter->count("--outer")) cfg.outer_iterations = counter_outer;
      const CounterexampleTrace trace = run_counterexample(cfg);
      const int window = std::max(1, cfg.outer_iterations / 2);
      const char* names[3] = {"x1", "x2", "mu"};
      const std::vector<double>* series[3] = {&trace.x1, &trace.x2, &trace.mu};
      for (int i = 0; i < 3; ++i) {
        const OscillationReport r = detect_oscillation(*series[i], window);
        std::printf("%s: amplitude %.6g -> %.6g (%s)\n", names[i],
                    r.amplitude_first, r.amplitude_last,
                    r.degenerate ? "flat"
                    : r.decaying ? "decaying"
                                 : "non-decaying");
      }
      if (!counter_out.empty()) {
        fs::create_directories(counter_out);
        const fs::path path = fs::path(counter_out) / "counterexample.csv";
        write_counterexample_csv(path.string(), trace, cfg);
        std::printf("wrote %s (%zu rows)\n", path.string().c_str(),
                    trace.x1.size());
      }
      return 0;
    }

    if (bounds->parsed()) {
      const RunTrace trace = read_trace_csv(trace_path);
      const BoundReport dual = check_dual_bound(trace);
      const BoundReport primal = check_primal_bound(trace, trace.alpha);
      std::printf("dual bound:   %d violations over %zu rounds\n",
                  dual.violations, dual.rows.size());
      std::printf("primal bound: %d violations over %zu rounds\n",
                  primal.violations, primal.rows.size());
      if (!bounds_out.empty()) {
        fs::create_directories(bounds_out);
        const fs::path d = fs::path(bounds_out) / "bounds_dual.csv";
        const fs::path p = fs::path(bounds_out) / "bounds_primal.csv";
        write_bound_report_csv(d.string(), dual);
        write_bound_report_csv(p.string(), primal);
        std::printf("wrote %s and %s\n", d.string().c_str(),
                    p.string().c_str());
      }
      return dual.violations == 0 && primal.violations == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
