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

#include "apd/sync.hpp"

#include <cmath>
#include <stdexcept>

namespace apd {

VectorXd primal_block_step(const ProblemSpec& p, int i, const VectorXd& x,
                           const VectorXd& mu, const RegParams& k,
                           double gamma) {
  VectorXd xi = p.blocks.block(x, i);
  xi -= gamma * grad_x_reg_block(p, i, x, mu, k);
  return xi.cwiseMax(p.blocks.block(p.box.lo, i))
      .cwiseMin(p.blocks.block(p.box.up, i));
}

VectorXd dual_step(const VectorXd& mu, const VectorXd& gx, double rho,
                   double beta, const DualBall& ball) {
  if (mu.size() == 0) return mu;
  return project_dual_ball(mu + rho * (gx - beta * mu), ball);
}

std::pair<VectorXd, VectorXd> sync_step(const ProblemSpec& p,
                                        const RegParams& k,
                                        const StepSizes& steps,
                                        const DualBall& ball, const VectorXd& x,
                                        const VectorXd& mu) {
  if (!(steps.gamma > 0.0)) {
    throw std::invalid_argument("sync_step: gamma must be positive");
  }
  if (p.num_constraints > 0 && !(steps.rho > 0.0)) {
    throw std::invalid_argument("sync_step: rho must be positive");
  }
  VectorXd xp(p.dim());
  for (int i = 0; i < p.agents(); ++i) {
    p.blocks.block(xp, i) = primal_block_step(p, i, x, mu, k, steps.gamma);
  }
  VectorXd mup = p.num_constraints > 0
                     ? dual_step(mu, p.g_value(x), steps.rho, k.beta, ball)
                     : VectorXd();
  return {std::move(xp), std::move(mup)};
}

StepSizes solver_step_sizes(const RegParams& k, const BoundsPack& bounds) {
  // The fixed point does not depend on the step sizes, so the oracle may use
  // the problem's own curvature on top of alpha. rho is kept near half the
  // exact-inner-solve threshold, which both keeps the coupled Jacobi
  // iteration contractive and roughly optimizes its oscillatory modes.
  const double sigma = k.alpha + bounds.curv_min;
  StepSizes s;
  s.gamma = 2.0 / (bounds.lp + sigma);
  s.rho = bounds.mg > 0.0
              ? 0.45 * sigma / (bounds.mg * bounds.mg + 2.0 * sigma * k.beta)
              : 1.0;
  return s;
}

SaddleEstimate solve_saddle(const ProblemSpec& p, const RegParams& k,
                            const BoundsPack& bounds,
                            const SolveOptions& opts) {
  if (!(opts.tol > 0.0)) {
    throw std::invalid_argument("solve_saddle: tol must be positive");
  }
  const StepSizes steps = opts.steps ? *opts.steps : solver_step_sizes(k, bounds);
  const DualBall ball =
      opts.ball ? *opts.ball : DualBall{bounds.mmu, p.num_constraints};
  VectorXd x = opts.x0 ? *opts.x0 : project_box(0.5 * (p.box.lo + p.box.up), p.box);
  VectorXd mu = opts.mu0 ? *opts.mu0 : VectorXd::Zero(p.num_constraints);

  SaddleEstimate est;
  double res = std::numeric_limits<double>::infinity();
  std::int64_t it = 0;
  while (it < opts.max_iterations) {
    auto [xp, mup] = sync_step(p, k, steps, ball, x, mu);
    res = std::sqrt((xp - x).squaredNorm() + (mup - mu).squaredNorm());
    x = std::move(xp);
    mu = std::move(mup);
    ++it;
    if (res < opts.tol) break;
  }
  est.x = std::move(x);
  est.mu = std::move(mu);
  est.residual = res;
  est.iterations = it;
  est.converged = res < opts.tol;
  return est;
}

SaddleEstimate solve_reference(const ProblemSpec& p, const SolveOptions& opts) {
  const RegParams k{1e-8, 1e-8};
  const BoundsPack bounds = compute_bounds(p, k.alpha);
  SolveOptions o = opts;
  if (o.tol <= 0.0) o.tol = 1e-10;
  return solve_saddle(p, k, bounds, o);
}

VectorXd inner_target(const ProblemSpec& p, const RegParams& k,
                      const VectorXd& mu, double gamma, double tol,
                      const VectorXd* warm, std::int64_t max_iterations) {
  if (!(gamma > 0.0) || !(tol > 0.0)) {
    throw std::invalid_argument("inner_target: gamma and tol must be positive");
  }
  VectorXd x = warm ? *warm : project_box(0.5 * (p.box.lo + p.box.up), p.box);
  VectorXd xp(p.dim());
  for (std::int64_t it = 0; it < max_iterations; ++it) {
    for (int i = 0; i < p.agents(); ++i) {
      p.blocks.block(xp, i) = primal_block_step(p, i, x, mu, k, gamma);
    }
    const double res = (xp - x).norm();
    x.swap(xp);
    if (res < tol) break;
  }
  return x;
}

}  // namespace apd
