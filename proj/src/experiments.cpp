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

#include "apd/experiments.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace apd {

MatrixXd flow_adjacency(const FlowRoutingConfig& config) {
  MatrixXd a = MatrixXd::Zero(config.num_edges, config.num_agents);
  if (static_cast<int>(config.paths.size()) != config.num_agents) {
    throw std::invalid_argument("FlowRoutingConfig: paths size != num_agents");
  }
  for (int i = 0; i < config.num_agents; ++i) {
    for (int e : config.paths[i]) {
      if (e < 1 || e > config.num_edges) {
        throw std::invalid_argument("FlowRoutingConfig: edge index out of range");
      }
      a(e - 1, i) = 1.0;
    }
  }
  return a;
}

ProblemSpec build_flow_problem(const FlowRoutingConfig& config) {
  const int n = config.num_agents;
  const int m = config.num_edges;
  const MatrixXd a = flow_adjacency(config);
  const MatrixXd gram = a.transpose() * a;
  const double delta = config.utility_weight;
  const double scale = config.congestion_scale;

  // sparse rows of the Gram matrix for the per-block coupling gradient
  std::vector<std::vector<std::pair<int, double>>> gram_rows(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (gram(i, j) != 0.0) gram_rows[i].push_back({j, gram(i, j)});
    }
  }
  std::vector<std::vector<std::pair<int, double>>> a_cols(n);
  for (int i = 0; i < n; ++i) {
    for (int e = 0; e < m; ++e) {
      if (a(e, i) != 0.0) a_cols[i].push_back({e, a(e, i)});
    }
  }

  ProblemSpec p;
  p.name = "flow-routing";
  p.blocks = BlockPartition::uniform(n, 1);
  p.box = BoxSet::cube(n, config.box_lo, config.box_up);
  p.num_constraints = m;
  p.fi_value = [delta](int, Eigen::Ref<const VectorXd> xi) {
    return -delta * std::log1p(xi[0]);
  };
  p.fi_grad = [delta](int, Eigen::Ref<const VectorXd> xi) {
    VectorXd g(1);
    g[0] = -delta / (1.0 + xi[0]);
    return g;
  };
  p.c_value = [a, scale](const VectorXd& x) {
    return scale * (a * x).squaredNorm();
  };
  p.c_grad_block = [gram_rows, scale](int i, const VectorXd& x) {
    double acc = 0.0;
    for (const auto& [j, w] : gram_rows[i]) acc += w * x[j];
    VectorXd g(1);
    g[0] = 2.0 * scale * acc;
    return g;
  };
  const VectorXd b = VectorXd::Constant(m, config.edge_capacity);
  p.g_value = [a, b](const VectorXd& x) -> VectorXd { return a * x - b; };
  p.g_jacobian = [a](const VectorXd&) { return a; };
  p.g_jtmu_block = [a_cols](int i, const VectorXd&, const VectorXd& mu) {
    double acc = 0.0;
    for (const auto& [e, w] : a_cols[i]) acc += w * mu[e];
    VectorXd g(1);
    g[0] = acc;
    return g;
  };
  p.sparsity.assign(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      p.sparsity[i][j] = i == j || gram(i, j) != 0.0;
    }
  }
  p.slater_point = VectorXd::Constant(n, config.slater_value);
  p.f_lower_bound =
      config.f_lb != 0.0
          ? config.f_lb
          : -static_cast<double>(n) * delta * std::log1p(config.box_up);

  const Eigen::SelfAdjointEigenSolver<MatrixXd> es(gram);
  const double lam_min = es.eigenvalues().minCoeff();
  const double lam_max = es.eigenvalues().maxCoeff();
  // -delta log(1+x) has curvature delta/(1+x)^2, extremal at the box ends
  const double diag_lo =
      delta / ((1.0 + config.box_up) * (1.0 + config.box_up));
  const double diag_hi =
      delta / ((1.0 + config.box_lo) * (1.0 + config.box_lo));
  p.hints.f_curv_min = diag_lo + 2.0 * scale * lam_min;
  p.hints.f_curv_max = diag_hi + 2.0 * scale * lam_max;
  p.hints.g_curv_max = 0.0;
  // each |grad f| component is monotone over the box; both extremes are
  // attained at the all-lo / all-up corners
  {
    VectorXd lo_corner = VectorXd::Constant(n, config.box_lo);
    VectorXd up_corner = VectorXd::Constant(n, config.box_up);
    VectorXd g_lo(n), g_up(n);
    for (int i = 0; i < n; ++i) {
      g_lo[i] = -delta / (1.0 + config.box_lo) +
                2.0 * scale * gram.row(i).dot(lo_corner);
      g_up[i] = -delta / (1.0 + config.box_up) +
                2.0 * scale * gram.row(i).dot(up_corner);
    }
    p.hints.grad_f_norm_max =
        std::sqrt(g_lo.cwiseAbs2().cwiseMax(g_up.cwiseAbs2()).sum());
  }
  p.hints.grad_g_norm_max = std::sqrt(lam_max);
  p.hints.grad_gj_norm_max = a.rowwise().norm();
  return p;
}

CounterexampleTrace run_counterexample(const CounterexampleConfig& config) {
  const double al = config.alpha;
  const double be = config.beta;
  const double gam = config.gamma;
  const double rho = config.rho;
  const double cap = config.dual_radius;

  auto theta1 = [&](double x1, double x2, double mu) {
    const double v = x1 - gam * (0.1 + al * x1 + mu * (x1 - x2));
    return std::min(std::max(v, 0.0), 5.0);
  };
  auto theta2 = [&](double x1, double x2, double mu) {
    const double v = x2 - gam * (-0.1 + al * x2 - mu * (x1 - x2));
    return std::min(std::max(v, 0.0), 5.0);
  };
  auto theta_m = [&](double x1, double x2, double mu) {
    const double g = 0.5 * (x1 - x2) * (x1 - x2) - 0.2;
    const double v = mu + rho * (g - be * mu);
    return std::min(std::max(v, 0.0), cap);
  };

  CounterexampleTrace trace;
  double x1 = 0.0, x2 = 0.0, mu = 0.0, mu_old = 0.0;
  for (int outer = 0; outer < config.outer_iterations; ++outer) {
    for (int it = 0; it < config.mode1_iterations; ++it) {
      x2 = theta2(x1, x2, mu_old);
      x1 = theta1(x1, x2, mu);
      mu = theta_m(x1, x2, mu);
      if (config.record_inner) trace.inner.push_back({x1, x2, mu});
    }
    mu_old = mu;
    for (int it = 0; it < config.mode2_iterations; ++it) {
      while (std::abs(x1 - theta1(x1, x2, mu)) > config.inner_tol) {
        x1 = theta1(x1, x2, mu);
      }
      while (std::abs(x2 - theta2(x1, x2, mu_old)) > config.inner_tol) {
        x2 = theta2(x1, x2, mu_old);
      }
      mu = theta_m(x1, x2, mu);
      if (config.record_inner) trace.inner.push_back({x1, x2, mu});
    }
    mu_old = mu;
    trace.x1.push_back(x1);
    trace.x2.push_back(x2);
    trace.mu.push_back(mu);
  }
  return trace;
}

FlowRefs compute_flow_refs(const ProblemSpec& p, const FlowRoutingConfig& c) {
  FlowRefs refs;
  refs.bounds = compute_bounds(p, c.alpha);
  refs.steps.gamma =
      c.gamma > 0.0 ? c.gamma : 2.0 / (refs.bounds.lp + c.alpha);
  if (c.rho > 0.0) {
    refs.steps.rho = c.rho;
  } else {
    const double rho0 =
        dual_rate_constants(1e-3, c.beta, c.alpha, refs.bounds.mg).rho0;
    refs.steps.rho = 0.9 * rho0;
  }
  const RegParams k{c.alpha, c.beta};
  SolveOptions so;
  so.tol = 1e-12;
  refs.reg = solve_saddle(p, k, refs.bounds, so);
  refs.unreg = solve_reference(p);
  return refs;
}

FlowResult run_flow_experiment(const ProblemSpec& p,
                               const FlowRoutingConfig& config,
                               const FlowRefs& refs) {
  FlowResult r;
  r.alpha = config.alpha;
  r.beta = config.beta;
  r.gamma = refs.steps.gamma;
  r.rho = refs.steps.rho;
  r.seed = config.seed;
  r.reg_gap_x = (refs.reg.x - refs.unreg.x).norm();
  r.reg_gap_mu = (refs.reg.mu - refs.unreg.mu).norm();
  r.max_g_saddle = p.g_value(refs.reg.x).maxCoeff();
  const ErrorBounds eb = error_bounds(RegParams{config.alpha, config.beta},
                                      refs.bounds);
  r.violation_bound = eb.violation.size() ? eb.violation.maxCoeff() : 0.0;

  ScheduleParams sp;
  sp.p_update = config.p_update;
  sp.p_edge = config.p_edge;
  sp.round_len_lo = config.round_len_lo;
  sp.round_len_hi = config.round_len_hi;
  sp.seed = config.seed;
  StreamSource source(p, sp);

  SimOptions opts;
  opts.max_rounds = config.horizon_rounds;
  opts.stop_tol = config.stop_tol;
  opts.stride = config.stride;
  SaddleRefs sr;
  sr.x_reg = refs.reg.x;
  sr.mu_reg = refs.reg.mu;
  sr.x_unreg = refs.unreg.x;
  sr.mu_unreg = refs.unreg.mu;
  opts.refs = sr;

  const VectorXd x0 = VectorXd::Zero(p.dim());
  const VectorXd mu0 = VectorXd::Zero(p.num_constraints);
  r.trace = run_async(p, RegParams{config.alpha, config.beta}, refs.steps,
                      refs.bounds, source, x0, mu0, opts);
  r.trace.seed = config.seed;
  r.converged = r.trace.converged;
  r.rounds = r.trace.rounds_run;
  const TraceRow& last = r.trace.rows.back();
  r.final_err_x_reg = last.err_x_reg;
  r.final_err_x_unreg = last.err_x_unreg;
  r.final_err_mu_reg = last.err_mu_reg;
  r.final_err_mu_unreg = last.err_mu_unreg;
  return r;
}

FlowResult run_flow_experiment(const FlowRoutingConfig& config) {
  const ProblemSpec p = build_flow_problem(config);
  const FlowRefs refs = compute_flow_refs(p, config);
  return run_flow_experiment(p, config, refs);
}

std::vector<FlowResult> run_flow_sweep(const FlowRoutingConfig& base) {
  std::vector<FlowResult> results;
  for (double ab : {0.1, 0.01, 0.001}) {
    FlowRoutingConfig c = base;
    c.alpha = ab;
    c.beta = ab;
    c.gamma = 0.0;
    c.rho = 0.0;
    results.push_back(run_flow_experiment(c));
  }
  return results;
}

}  // namespace apd
