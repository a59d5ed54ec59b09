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

#ifndef APD_REG_HPP_
#define APD_REG_HPP_

#include <utility>

#include "apd/problem.hpp"

namespace apd {

// Tikhonov regularization weights: adds (alpha/2)||x||^2 to the primal side
// and subtracts (beta/2)||mu||^2 on the dual side of the Lagrangian.
struct RegParams {
  double alpha = 0.0;
  double beta = 0.0;
};

struct StepSizes {
  double gamma = 0.0;  // primal
  double rho = 0.0;    // dual
};

// M = { mu >= 0 : ||mu||_1 <= radius }.
struct DualBall {
  double radius = 0.0;
  int dim = 0;
};

// L_k(x, mu) = f(x) + (alpha/2)||x||^2 + mu^T g(x) - (beta/2)||mu||^2.
double reg_lagrangian(const ProblemSpec& p, const VectorXd& x,
                      const VectorXd& mu, const RegParams& k);

// grad_x L_k = grad f(x) + alpha*x + J_g(x)^T mu, full and per block. The full
// vector is assembled from the per-block kernel so both paths agree bitwise.
VectorXd grad_x_reg(const ProblemSpec& p, const VectorXd& x, const VectorXd& mu,
                    const RegParams& k);
VectorXd grad_x_reg_block(const ProblemSpec& p, int i, const VectorXd& x,
                          const VectorXd& mu, const RegParams& k);

// grad_mu L_k = g(x) - beta*mu.
VectorXd grad_mu_reg(const ProblemSpec& p, const VectorXd& x,
                     const VectorXd& mu, const RegParams& k);

// Componentwise clamp onto the box.
VectorXd project_box(const VectorXd& v, const BoxSet& box);

// Exact Euclidean projection onto { mu >= 0, ||mu||_1 <= radius }: project
// onto the nonnegative orthant; if the l1 norm still exceeds the radius,
// apply the sort-based simplex threshold to the original coordinates.
VectorXd project_dual_ball(const VectorXd& v, const DualBall& ball);

// q_p = max{|1 - gamma*alpha|, |1 - gamma*L_p|}, in (0,1) for
// gamma in (0, 2/L_p) and alpha in (0, L_p); minimized at gamma = 2/(L_p+alpha)
// where it equals (L_p-alpha)/(L_p+alpha). Throws outside the valid ranges.
double contraction_qp(double gamma, double alpha, double lp);

// rho0 = min{ 2a/(Mg^2 + 2ab), 2b/(1+b^2) } and q_d = (1-rho*b)^2 + rho^2.
// q_d < 1 whenever rho in (0, rho0).
struct DualRate {
  double rho0 = 0.0;
  double qd = 0.0;
};
DualRate dual_rate_constants(double rho, double beta, double alpha, double mg);

struct BoundsPack;  // bounds.hpp

// Picks (alpha, beta) so both regularization error bounds are below eps:
// alpha = 0.9 * 2*eps / (Mhat + Mx^2) with Mhat = max{max_j Mgj*Mmu, Mf*Mmu},
// beta = alpha^3/2.
RegParams choose_reg_params(double eps, const BoundsPack& bounds);

// A priori regularization errors: cost |f(x_k) - f(x*)| and per-constraint
// violation max{0, g_j(x_k)}.
struct ErrorBounds {
  double cost = 0.0;
  VectorXd violation;
};
ErrorBounds error_bounds(const RegParams& k, const BoundsPack& bounds);

}  // namespace apd

#endif  // APD_REG_HPP_
