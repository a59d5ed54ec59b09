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

#ifndef APD_SYNC_HPP_
#define APD_SYNC_HPP_

#include <cstdint>
#include <optional>
#include <utility>

#include "apd/bounds.hpp"
#include "apd/problem.hpp"
#include "apd/reg.hpp"

namespace apd {

struct SaddleEstimate {
  VectorXd x;
  VectorXd mu;
  double residual = 0.0;  // one-step fixed-point residual at exit
  std::int64_t iterations = 0;
  bool converged = false;
};

// One Jacobi step of the projected primal-dual map: both halves read the same
// (x, mu). The primal half is assembled from the per-block kernel shared with
// the asynchronous simulator.
//   x+  = P_X[x - gamma * grad_x L_k(x, mu)]
//   mu+ = P_M[mu + rho * (g(x) - beta*mu)]
std::pair<VectorXd, VectorXd> sync_step(const ProblemSpec& p,
                                        const RegParams& k,
                                        const StepSizes& steps,
                                        const DualBall& ball, const VectorXd& x,
                                        const VectorXd& mu);

// Per-block primal update kernel: P_{X_i}[x_i - gamma * grad_{x_i} L_k(x, mu)].
// The asynchronous simulator and sync_step both call this, so a degenerate
// schedule reproduces the synchronous trajectory bitwise.
VectorXd primal_block_step(const ProblemSpec& p, int i, const VectorXd& x,
                           const VectorXd& mu, const RegParams& k,
                           double gamma);

// Dual update kernel shared by sync_step and the cloud:
// P_M[mu + rho * (gx - beta*mu)].
VectorXd dual_step(const VectorXd& mu, const VectorXd& gx, double rho,
                   double beta, const DualBall& ball);

// Step sizes for the fixed-point oracle. gamma = 2/(lp + sigma) with
// sigma = alpha + curv_min, and rho scaled to keep the coupled Jacobi
// iteration contractive even when alpha and beta are vanishingly small.
StepSizes solver_step_sizes(const RegParams& k, const BoundsPack& bounds);

struct SolveOptions {
  double tol = 1e-10;
  std::int64_t max_iterations = 10'000'000;
  std::optional<StepSizes> steps;   // default: solver_step_sizes
  std::optional<DualBall> ball;     // default: dual_ball(p, alpha)
  std::optional<VectorXd> x0;       // default: box midpoint
  std::optional<VectorXd> mu0;      // default: zero
};

// Iterates sync_step from (x0, mu0) until the one-step residual
// ||(x,mu) - sync_step(x,mu)||_2 drops below tol. Deterministic.
SaddleEstimate solve_saddle(const ProblemSpec& p, const RegParams& k,
                            const BoundsPack& bounds,
                            const SolveOptions& opts = {});

// Reference solution of the unregularized problem: solve_saddle with
// alpha = beta = 1e-8 and tol = 1e-10.
SaddleEstimate solve_reference(const ProblemSpec& p,
                               const SolveOptions& opts = {});

// Fixed point of x -> P_X[x - gamma * grad_x L_k(x, mu)] at fixed mu; the
// unique minimizer of L_k(., mu) over X. `warm` seeds the iteration.
VectorXd inner_target(const ProblemSpec& p, const RegParams& k,
                      const VectorXd& mu, double gamma, double tol = 1e-10,
                      const VectorXd* warm = nullptr,
                      std::int64_t max_iterations = 10'000'000);

}  // namespace apd

#endif  // APD_SYNC_HPP_
