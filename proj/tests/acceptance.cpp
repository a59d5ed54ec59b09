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

// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the exit status is the number of failed criteria.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <map>
#include <random>

#include <Eigen/SVD>
#include <string>
#include <vector>

#include "apd/analysis.hpp"
#include "apd/bounds.hpp"
#include "apd/csv.hpp"
#include "apd/experiments.hpp"
#include "apd/sim.hpp"
#include "apd/sync.hpp"

using namespace apd;

namespace {

bool g_verbose = true;

void note(const char* fmt, ...) {
  if (!g_verbose) return;
  va_list args;
  va_start(args, fmt);
  std::vprintf(fmt, args);
  va_end(args);
  std::printf("\n");
}

double rel_err(double measured, double expected) {
  return std::abs(measured - expected) / std::abs(expected);
}

struct FlowSetting {
  double ab;
  double expect_gap_x;    // pinned target for |x_k - x*|
  double expect_max_g;    // pinned target for max_j g_j(x_k)
};

const FlowSetting kSettings[] = {
    {0.1, 8.616, 1.948}, {0.01, 0.223, 0.252}, {0.001, 0.0237, 0.0262}};

struct FlowOracle {
  ProblemSpec problem;
  BoundsPack bounds;
  SaddleEstimate reg;
  StepSizes run_steps;
};

FlowOracle flow_oracle(double ab) {
  FlowRoutingConfig cfg;
  cfg.alpha = cfg.beta = ab;
  FlowOracle o;
  o.problem = build_flow_problem(cfg);
  o.bounds = compute_bounds(o.problem, ab);
  SolveOptions so;
  so.tol = 1e-12;
  o.reg = solve_saddle(o.problem, RegParams{ab, ab}, o.bounds, so);
  o.run_steps.gamma = 2.0 / (o.bounds.lp + ab);
  o.run_steps.rho =
      0.9 * dual_rate_constants(1e-6, ab, ab, o.bounds.mg).rho0;
  return o;
}

// ---- criterion 1: regularization gap, primal ------------------------------

bool criterion1() {
  const SaddleEstimate ref = solve_reference(build_flow_problem({}));
  if (!ref.converged) {
    note("  reference solve did not converge");
    return false;
  }
  bool ok = true;
  for (const FlowSetting& s : kSettings) {
    const FlowOracle o = flow_oracle(s.ab);
    if (!o.reg.converged) {
      note("  saddle solve at alpha=beta=%g did not converge", s.ab);
      ok = false;
      continue;
    }
    const double gap = (o.reg.x - ref.x).norm();
    const double err = rel_err(gap, s.expect_gap_x);
    const double dual_gap = (o.reg.mu - ref.mu).norm();
    note("  alpha=beta=%-6g |x_k - x*| = %.6g  (expected %.4g, rel err %.3g)"
         "   [dual gap |mu_k - mu*| = %.6g]",
         s.ab, gap, s.expect_gap_x, err, dual_gap);
    ok = ok && err <= 0.02;
  }
  return ok;
}

// ---- criterion 2: constraint violation ------------------------------------

bool criterion2() {
  bool ok = true;
  for (const FlowSetting& s : kSettings) {
    const FlowOracle o = flow_oracle(s.ab);
    const double max_g = o.problem.g_value(o.reg.x).maxCoeff();
    const double err = rel_err(max_g, s.expect_max_g);
    const ErrorBounds eb = error_bounds(RegParams{s.ab, s.ab}, o.bounds);
    const double apriori_bound = eb.violation.maxCoeff();
    note("  alpha=beta=%-6g max_j g_j(x_k) = %.6g (expected %.4g, rel err "
         "%.3g); a-priori bound %.4g",
         s.ab, max_g, s.expect_max_g, err, apriori_bound);
    ok = ok && err <= 0.02 && max_g <= apriori_bound;
  }
  return ok;
}

// ---- criterion 3: asynchronous convergence --------------------------------

bool criterion3() {
  bool ok = true;
  std::vector<double> unreg_gaps;
  std::vector<std::int64_t> rounds_used;
  for (const FlowSetting& s : kSettings) {
    FlowRoutingConfig cfg;
    cfg.alpha = cfg.beta = s.ab;
    cfg.stop_tol = 5e-7;
    cfg.stride = 2000;
    cfg.horizon_rounds = s.ab >= 0.1 ? 200'000
                         : s.ab >= 0.01 ? 1'500'000
                                        : 4'000'000;
    const ProblemSpec p = build_flow_problem(cfg);
    const FlowRefs refs = compute_flow_refs(p, cfg);
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      cfg.seed = seed;
      const FlowResult r = run_flow_experiment(p, cfg, refs);
      const bool pass = r.converged && r.final_err_x_reg < 1e-6 &&
                        r.final_err_mu_reg < 1e-6;
      note("  alpha=beta=%-6g seed %llu: rounds=%-9lld |x^c-x_k|=%.3g "
           "|mu-mu_k|=%.3g %s",
           s.ab, static_cast<unsigned long long>(seed),
           static_cast<long long>(r.rounds), r.final_err_x_reg,
           r.final_err_mu_reg, pass ? "ok" : "NOT CONVERGED");
      ok = ok && pass;
      if (seed == 1) {
        unreg_gaps.push_back(r.final_err_x_unreg);
        rounds_used.push_back(r.rounds);
      }
    }
  }
  // the speed/accuracy tradeoff across the sweep: smaller regularization
  // gives smaller final unregularized error but needs more rounds
  for (std::size_t i = 1; i < unreg_gaps.size(); ++i) {
    note("  sweep ordering: gap %.4g -> %.4g, rounds %lld -> %lld",
         unreg_gaps[i - 1], unreg_gaps[i],
         static_cast<long long>(rounds_used[i - 1]),
         static_cast<long long>(rounds_used[i]));
    ok = ok && unreg_gaps[i] < unreg_gaps[i - 1] &&
         rounds_used[i] > rounds_used[i - 1];
  }
  return ok;
}

// ---- criterion 4: rate-bound soundness -------------------------------------

bool criterion4() {
  bool ok = true;
  auto check_trace = [&](double ab, std::uint64_t seed, std::int64_t rounds,
                         double p_upload) {
    FlowRoutingConfig cfg;
    cfg.alpha = cfg.beta = ab;
    const ProblemSpec p = build_flow_problem(cfg);
    const BoundsPack bounds = compute_bounds(p, ab);
    const RegParams k{ab, ab};
    SolveOptions so;
    so.tol = 1e-12;
    const SaddleEstimate saddle = solve_saddle(p, k, bounds, so);
    const StepSizes steps{2.0 / (bounds.lp + ab),
                          0.9 * dual_rate_constants(1e-6, ab, ab, bounds.mg)
                                    .rho0};
    ScheduleParams sp;
    sp.seed = seed;
    sp.p_upload = p_upload;
    StreamSource src(p, sp);
    SimOptions opts;
    opts.max_rounds = rounds;
    opts.stride = 1;
    opts.track_round_targets = true;
    SaddleRefs refs;
    refs.x_reg = saddle.x;
    refs.mu_reg = saddle.mu;
    opts.refs = refs;
    const RunTrace trace =
        p_upload < 1.0
            ? run_async_partial(p, k, steps, bounds, src, VectorXd::Zero(8),
                                VectorXd::Zero(9), opts)
            : run_async(p, k, steps, bounds, src, VectorXd::Zero(8),
                        VectorXd::Zero(9), opts);
    const BoundReport dual = check_dual_bound(trace);
    const BoundReport primal = check_primal_bound(trace, ab);
    int contraction_violations = 0;
    int partial_violations = 0;
    for (const TraceRow& row : trace.rows) {
      const double round_bound =
          primal_round_bound(row.cycles, row.d_kt, trace.qp);
      // the aggregate contraction estimate presumes every block is fresh;
      // rounds with stale blocks are covered by the partial-aggregate bound
      if (p_upload >= 1.0 && row.bmax_xc_target > round_bound + 1e-9) {
        ++contraction_violations;
      }
      if (row.max_agent_bmax > round_bound + 1e-9) ++contraction_violations;
      const double pb = partial_round_bound(row.fresh, trace.num_agents,
                                            row.cycles, row.d_kt, trace.qp,
                                            trace.lx);
      if (row.l2_xc_target > pb + 1e-9) ++partial_violations;
    }
    note("  alpha=beta=%-5g seed %llu p_upload=%.2f rounds=%lld: dual-rate "
         "violations %d/%zu, primal-rate %d/%zu, per-round contraction %d, "
         "partial-aggregate %d",
         ab, static_cast<unsigned long long>(seed), p_upload,
         static_cast<long long>(rounds), dual.violations, dual.rows.size(),
         primal.violations, primal.rows.size(), contraction_violations,
         partial_violations);
    return dual.violations == 0 && primal.violations == 0 &&
           contraction_violations == 0 && partial_violations == 0;
  };
  ok = check_trace(0.1, 11, 4000, 1.0) && ok;
  ok = check_trace(0.01, 12, 4000, 1.0) && ok;
  ok = check_trace(0.1, 13, 1500, 0.5) && ok;
  return ok;
}

// ---- criterion 5: counterexample ------------------------------------------

bool criterion5() {
  const CounterexampleConfig cfg;  // default constants
  const CounterexampleTrace trace = run_counterexample(cfg);
  bool oscillates = true;
  const char* names[3] = {"x1", "x2", "mu"};
  const std::vector<double>* series[3] = {&trace.x1, &trace.x2, &trace.mu};
  for (int i = 0; i < 3; ++i) {
    const OscillationReport r = detect_oscillation(*series[i], 5);
    const double ratio =
        r.amplitude_first > 0.0 ? r.amplitude_last / r.amplitude_first : 0.0;
    note("  %s: amplitude %.6g -> %.6g (ratio %.4g, %s)", names[i],
         r.amplitude_first, r.amplitude_last, ratio,
         r.decaying ? "decaying" : "non-decaying");
    oscillates = oscillates && !r.decaying && !r.degenerate;
  }

  // the same problem under the synchronized-dual simulator converges
  const ProblemSpec p = make_two_agent_gap_problem();
  const RegParams k{cfg.alpha, cfg.beta};
  const BoundsPack bounds = compute_bounds(p, cfg.alpha);
  const StepSizes steps{cfg.gamma, cfg.rho};
  SolveOptions so;
  so.tol = 1e-12;
  const SaddleEstimate saddle = solve_saddle(p, k, bounds, so);
  ScheduleParams sp;
  sp.seed = 5;
  StreamSource src(p, sp);
  SimOptions opts;
  opts.max_rounds = 200'000;
  opts.stop_tol = 5e-7;
  opts.stride = 1000;
  SaddleRefs refs;
  refs.x_reg = saddle.x;
  refs.mu_reg = saddle.mu;
  opts.refs = refs;
  const RunTrace rt = run_async(p, k, steps, bounds, src,
                                VectorXd::Zero(2), VectorXd::Zero(1), opts);
  const bool sync_converges = rt.converged &&
                              rt.rows.back().err_x_reg < 1e-6 &&
                              rt.rows.back().err_mu_reg < 1e-6;
  note("  synchronized dual: converged=%d after %lld rounds, |x^c-x_k|=%.3g",
       rt.converged ? 1 : 0, static_cast<long long>(rt.rounds_run),
       rt.rows.back().err_x_reg);
  return oscillates && sync_converges;
}

// ---- criterion 6: degeneracy equivalence -----------------------------------

bool criterion6_case(const ProblemSpec& p, const RegParams& k,
                     const StepSizes& steps, const BoundsPack& bounds,
                     const VectorXd& x0, const VectorXd& mu0,
                     const char* label) {
  const int ticks = 100;
  const int rounds = ticks / 2;
  const DualBall ball{bounds.mmu, p.num_constraints};
  std::vector<VectorXd> xs = {x0};
  std::vector<VectorXd> mus = {mu0};
  for (int i = 0; i <= rounds; ++i) {
    auto [xp, mup] = sync_step(p, k, steps, ball, xs.back(), mus.back());
    xs.push_back(std::move(xp));
    mus.push_back(std::move(mup));
  }
  const auto nb = essential_neighborhoods(p);
  std::int64_t mismatches = 0;
  std::int64_t ticks_seen = 0;
  SimOptions opts;
  opts.max_rounds = rounds;
  opts.observer = [&](Tick tick, const std::vector<VectorXd>& copies,
                      const VectorXd& mu, std::int64_t t) {
    ++ticks_seen;
    const auto s = static_cast<std::size_t>(t);
    const bool second = (tick % 2) == 1;
    if (mu.size() && std::memcmp(mu.data(), mus[s].data(),
                                 sizeof(double) * mu.size()) != 0) {
      ++mismatches;
    }
    for (int i = 0; i < p.agents(); ++i) {
      const double own_expect = second ? xs[s + 1][i] : xs[s][i];
      if (std::memcmp(&copies[i][i], &own_expect, sizeof(double)) != 0) {
        ++mismatches;
      }
      for (int j : nb[i]) {
        if (std::memcmp(&copies[i][j], &xs[s][j], sizeof(double)) != 0) {
          ++mismatches;
        }
      }
    }
  };
  const SimSchedule sched = jacobi_equivalent_schedule(p, rounds);
  run_async(p, k, steps, bounds, sched, x0, mu0, opts);
  note("  %s: %lld ticks compared bitwise, %lld mismatches", label,
       static_cast<long long>(ticks_seen), static_cast<long long>(mismatches));
  return ticks_seen == ticks && mismatches == 0;
}

bool criterion6() {
  bool ok = true;
  {
    FlowRoutingConfig cfg;
    cfg.alpha = cfg.beta = 0.1;
    const ProblemSpec p = build_flow_problem(cfg);
    const BoundsPack bounds = compute_bounds(p, 0.1);
    const StepSizes steps{2.0 / (bounds.lp + 0.1),
                          0.9 * dual_rate_constants(1e-6, 0.1, 0.1, bounds.mg)
                                    .rho0};
    ok = criterion6_case(p, RegParams{0.1, 0.1}, steps, bounds,
                         VectorXd::Constant(8, 0.5),
                         VectorXd::Constant(9, 0.1), "flow") &&
         ok;
  }
  {
    const VectorXd w = VectorXd::Ones(2);
    const VectorXd tgt = VectorXd::Constant(2, 3.0);
    MatrixXd a(1, 2);
    a << 1.0, 1.0;
    ProblemSpec p = make_quadratic_problem(w, tgt, a, VectorXd::Constant(1, 4.0),
                                           BoxSet::cube(2, 0.0, 10.0),
                                           VectorXd::Ones(2), 0.0);
    p.sparsity = {{true, true}, {true, true}};
    const BoundsPack bounds = compute_bounds(p, 0.1);
    const StepSizes steps{0.02, 0.01};
    ok = criterion6_case(p, RegParams{0.1, 0.1}, steps, bounds,
                         (VectorXd(2) << 5.0, 1.0).finished(),
                         VectorXd::Constant(1, 0.2), "two-agent qp") &&
         ok;
  }
  return ok;
}

// ---- criterion 7: parameter-selection round trip ---------------------------

bool criterion7() {
  const ProblemSpec p = build_flow_problem({});
  const BoundsPack ref_bounds = compute_bounds(p, 1.0);  // conservative M_mu
  const SaddleEstimate ref = solve_reference(p);
  const double f_star = f_value(p, ref.x);
  bool ok = true;
  for (double eps : {1.0, 0.1, 0.01}) {
    const RegParams k = choose_reg_params(eps, ref_bounds);
    const ErrorBounds eb = error_bounds(k, ref_bounds);
    const BoundsPack kb = compute_bounds(p, k.alpha);
    SolveOptions so;
    so.tol = 1e-11;
    const SaddleEstimate est = solve_saddle(p, k, kb, so);
    const double cost_gap = std::abs(f_value(p, est.x) - f_star);
    const double viol = std::max(0.0, p.g_value(est.x).maxCoeff());
    note("  eps=%-5g alpha=%.3e beta=%.3e: bound(cost)=%.4g bound(viol)=%.4g "
         "measured cost gap %.4g, violation %.4g",
         eps, k.alpha, k.beta, eb.cost, eb.violation.maxCoeff(), cost_gap,
         viol);
    ok = ok && eb.cost < eps && eb.violation.maxCoeff() < eps &&
         cost_gap < eps && viol < eps && est.converged;
  }
  return ok;
}

// ---- criterion 8: property suites ------------------------------------------

bool criterion8() {
  std::mt19937_64 rng(99);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  auto random_vec = [&](int n, double lo, double hi) {
    VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  };
  bool ok = true;

  // projections: idempotent, non-expansive
  {
    const BoxSet box = BoxSet::cube(6, -1.0, 4.0);
    const DualBall ball{3.0, 6};
    int bad = 0;
    for (int s = 0; s < 1000; ++s) {
      const VectorXd u = random_vec(6, -8.0, 8.0);
      const VectorXd v = random_vec(6, -8.0, 8.0);
      const VectorXd pu = project_box(u, box);
      const VectorXd qu = project_dual_ball(u, ball);
      if ((project_box(pu, box) - pu).norm() != 0.0) ++bad;
      if ((pu - project_box(v, box)).norm() > (u - v).norm() + 1e-12) ++bad;
      if ((project_dual_ball(qu, ball) - qu).norm() > 1e-14) ++bad;
      if ((qu - project_dual_ball(v, ball)).norm() > (u - v).norm() + 1e-12) {
        ++bad;
      }
    }
    note("  projections: %d violations in 1000 samples", bad);
    ok = ok && bad == 0;
  }

  // gradients vs central finite differences, 20 points per problem
  {
    const std::vector<ProblemSpec> problems = {
        build_flow_problem({}), make_two_agent_gap_problem(),
        make_four_agent_pairs_problem()};
    int bad = 0;
    for (const ProblemSpec& p : problems) {
      for (int s = 0; s < 20; ++s) {
        VectorXd x(p.dim());
        for (int i = 0; i < p.dim(); ++i) {
          x[i] = p.box.lo[i] + (0.05 + 0.9 * uniform(0.0, 1.0)) *
                                   (p.box.up[i] - p.box.lo[i]);
        }
        const double h = 1e-6 * (1.0 + x.norm());
        const VectorXd g = f_grad(p, x);
        for (int i = 0; i < p.dim(); ++i) {
          VectorXd xp = x, xm = x;
          xp[i] += h;
          xm[i] -= h;
          const double fd = (f_value(p, xp) - f_value(p, xm)) / (2.0 * h);
          if (std::abs(g[i] - fd) > 1e-5 * std::max(1.0, std::abs(fd))) ++bad;
        }
      }
    }
    note("  finite differences: %d bad components", bad);
    ok = ok && bad == 0;
  }

  // norm inequalities on 1000 samples; induced norm on 100 matrices
  {
    const BlockPartition part = BlockPartition::from_sizes({2, 3, 1, 2});
    int bad = 0;
    for (int s = 0; s < 1000; ++s) {
      const VectorXd v = random_vec(8, -5.0, 5.0);
      const double bmax = block_max_norm(v, part);
      if (v.norm() > 2.0 * bmax + 1e-12) ++bad;
      if (bmax > v.norm() + 1e-12) ++bad;
    }
    for (int m = 0; m < 100; ++m) {
      MatrixXd a(8, 8);
      for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) a(i, j) = uniform(-1.0, 1.0);
      }
      const double spectral = a.jacobiSvd().singularValues()(0);
      for (int s = 0; s < 10; ++s) {
        const VectorXd v = random_vec(8, -1.0, 1.0);
        const VectorXd av = a * v;
        if (block_max_norm(av, part) > av.norm() * (1.0 + 1e-12)) ++bad;
        if (block_max_norm(av, part) > spectral * v.norm() * (1.0 + 1e-12)) {
          ++bad;
        }
      }
    }
    note("  norm inequalities: %d violations", bad);
    ok = ok && bad == 0;
  }

  // strong monotonicity of the regularized primal gradient
  {
    const ProblemSpec p = build_flow_problem({});
    const RegParams k{0.05, 0.05};
    int bad = 0;
    for (int s = 0; s < 200; ++s) {
      const VectorXd u = random_vec(8, 0.0, 10.0);
      const VectorXd v = random_vec(8, 0.0, 10.0);
      const VectorXd mu = random_vec(9, 0.0, 3.0);
      const double lhs =
          (grad_x_reg(p, u, mu, k) - grad_x_reg(p, v, mu, k)).dot(u - v);
      if (lhs < k.alpha * (u - v).squaredNorm() - 1e-10) ++bad;
    }
    note("  strong monotonicity: %d violations in 200 samples", bad);
    ok = ok && bad == 0;
  }

  // FIFO / discard / dual-synchrony assertions on 10 random schedules
  {
    const ProblemSpec p = build_flow_problem({});
    const RegParams k{0.1, 0.1};
    const BoundsPack bounds = compute_bounds(p, 0.1);
    const StepSizes steps{2.0 / (bounds.lp + 0.1),
                          0.9 * dual_rate_constants(1e-6, 0.1, 0.1, bounds.mg)
                                    .rho0};
    int bad = 0;
    for (std::uint64_t seed = 21; seed < 31; ++seed) {
      ScheduleParams sp;
      sp.seed = seed;
      sp.delay_hi = 6;
      StreamSource src(p, sp);
      SimOptions opts;
      opts.max_rounds = 30;
      opts.record_events = true;
      const RunTrace trace = run_async(p, k, steps, bounds, src,
                                       VectorXd::Zero(8), VectorXd::Zero(9),
                                       opts);
      std::map<std::pair<int, int>, std::deque<Tick>> sent;
      std::map<std::pair<int, int>, Tick> last_arrival;
      std::int64_t current_round = 0;
      for (const SimEvent& e : trace.events) {
        switch (e.kind) {
          case SimEvent::Kind::kDualUpdate:
            current_round = e.stamp;
            break;
          case SimEvent::Kind::kSend:
            sent[{e.from, e.to}].push_back(e.tick);
            break;
          case SimEvent::Kind::kDeliver:
          case SimEvent::Kind::kDiscard: {
            auto& q = sent[{e.from, e.to}];
            if (q.empty()) {
              ++bad;
              break;
            }
            q.pop_front();
            auto& last = last_arrival[{e.from, e.to}];
            if (e.tick < last) ++bad;  // FIFO violation
            last = e.tick;
            const bool fresh = e.stamp == current_round;
            if (fresh != (e.kind == SimEvent::Kind::kDeliver)) ++bad;
            break;
          }
          case SimEvent::Kind::kUpdate:
          case SimEvent::Kind::kUpload:
            if (e.stamp != current_round) ++bad;  // dual synchrony
            break;
        }
      }
    }
    note("  trace assertions over 10 random schedules: %d violations", bad);
    ok = ok && bad == 0;
  }
  return ok;
}

struct Criterion {
  int id;
  const char* name;
  bool (*fn)();
};

const Criterion kCriteria[] = {
    {1, "regularization gap (primal) vs pinned target values", criterion1},
    {2, "constraint violation vs pinned targets and the a-priori bound",
     criterion2},
    {3, "asynchronous convergence to the regularized saddle (3 seeds)",
     criterion3},
    {4, "rate bounds hold at every round of every stored trace", criterion4},
    {5, "dual-asynchrony counterexample vs synchronized run", criterion5},
    {6, "degenerate schedule equals the synchronous iteration bitwise",
     criterion6},
    {7, "parameter selection keeps both errors below every target",
     criterion7},
    {8, "property suites (projections, gradients, norms, traces)", criterion8},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--quiet") == 0) {
      g_verbose = false;
    }
  }
  if (only != 0 && (only < 1 || only > 8)) {
    std::fprintf(stderr, "unknown criterion %d (valid: 1..8)\n", only);
    return 2;
  }
  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    std::printf("criterion %d: %s\n", c.id, c.name);
    bool pass = false;
    try {
      pass = c.fn();
    } catch (const std::exception& e) {
      std::printf("  exception: %s\n", e.what());
    }
    std::printf("[%s] criterion %d\n", pass ? "PASS" : "FAIL", c.id);
    if (!pass) ++failures;
  }
  return failures;
}
