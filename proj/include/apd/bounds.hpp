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

#ifndef APD_BOUNDS_HPP_
#define APD_BOUNDS_HPP_

#include "apd/problem.hpp"
#include "apd/reg.hpp"

namespace apd {

// Problem constants over X and the dual ball M. All are upper bounds; the
// rate checks stay sound if they over-estimate.
struct BoundsPack {
  double lp = 0.0;    // Lipschitz constant of grad_x L_k(., mu) over X, mu in M
  double mg = 0.0;    // max_X ||J_g||_2
  double mf = 0.0;    // max_X ||grad f||_2
  double mx = 0.0;    // max_X ||x||_2
  double mmu = 0.0;   // max_M ||mu||_2 (= dual ball radius)
  double dx = 0.0;    // diameter of X
  double lx = 0.0;    // max block diameter
  VectorXd mgj;       // per-constraint max_X ||grad g_j||_2
  double curv_min = 0.0;  // lower eigenvalue bound of hess f over X (>= 0)
  bool sampled = false;   // true if any constant came from sampling fallback
};

// l1 radius of the dual ball from a Slater point:
// B = (f(xbar) + (alpha/2)||xbar||^2 - f_lb) / min_j(-g_j(xbar)).
// Throws if the Slater point is not strictly feasible. Problems with no
// constraints get radius 0.
double dual_ball_radius(const ProblemSpec& p, double alpha);

// Assembles the constants. Closed forms are used where the problem supplies
// hints (curvature ranges, gradient-norm maxima); otherwise the constants are
// estimated by maximizing over box corners plus `samples` quasi-random
// interior points, and the result is flagged `sampled`.
//
// lp = sup_X lammax(hess f) + alpha + B * max_j sup_X lammax(hess g_j).
BoundsPack compute_bounds(const ProblemSpec& p, double alpha,
                          int samples = 4096);

DualBall dual_ball(const ProblemSpec& p, double alpha);

}  // namespace apd

#endif  // APD_BOUNDS_HPP_
