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

#include "apd/reg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "apd/bounds.hpp"

namespace apd {

double reg_lagrangian(const ProblemSpec& p, const VectorXd& x,
                      const VectorXd& mu, const RegParams& k) {
  if (x.size() != p.dim() || mu.size() != p.num_constraints) {
    throw std::invalid_argument("reg_lagrangian: dimension mismatch");
  }
  double v = f_value(p, x) + 0.5 * k.alpha * x.squaredNorm() -
             0.5 * k.beta * mu.squaredNorm();
  if (p.num_constraints > 0) v += mu.dot(p.g_value(x));
  return v;
}

VectorXd grad_x_reg_block(const ProblemSpec& p, int i, const VectorXd& x,
                          const VectorXd& mu, const RegParams& k) {
  VectorXd g = f_grad_block(p, i, x);
  g += k.alpha * p.blocks.block(x, i);
  if (p.num_constraints > 0) g += p.g_jtmu_block(i, x, mu);
  return g;
}

VectorXd grad_x_reg(const ProblemSpec& p, const VectorXd& x, const VectorXd& mu,
                    const RegParams& k) {
  if (x.size() != p.dim() || mu.size() != p.num_constraints) {
    throw std::invalid_argument("grad_x_reg: dimension mismatch");
  }
  VectorXd g(p.dim());
  for (int i = 0; i < p.agents(); ++i) {
    p.blocks.block(g, i) = grad_x_reg_block(p, i, x, mu, k);
  }
  return g;
}

VectorXd grad_mu_reg(const ProblemSpec& p, const VectorXd& x,
                     const VectorXd& mu, const RegParams& k) {
  if (x.size() != p.dim() || mu.size() != p.num_constraints) {
    throw std::invalid_argument("grad_mu_reg: dimension mismatch");
  }
  if (p.num_constraints == 0) return VectorXd();
  return p.g_value(x) - k.beta * mu;
}

VectorXd project_box(const VectorXd& v, const BoxSet& box) {
  if (v.size() != box.dim()) {
    throw std::invalid_argument("project_box: dimension mismatch");
  }
  return v.cwiseMax(box.lo).cwiseMin(box.up);
}

VectorXd project_dual_ball(const VectorXd& v, const DualBall& ball) {
  if (v.size() != ball.dim) {
    throw std::invalid_argument("project_dual_ball: dimension mismatch");
  }
  if (ball.dim == 0) return VectorXd();
  if (ball.radius <= 0.0) {
    throw std::invalid_argument("project_dual_ball: radius must be positive");
  }
  VectorXd clipped = v.cwiseMax(0.0);
  const double l1 = clipped.sum();
  if (l1 <= ball.radius) return clipped;
  // Simplex-style threshold on the original coordinates: the projection is
  // max(v_i - theta, 0) with theta > 0 chosen so the positive parts sum to
  // the radius.
  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t r = 0; r < sorted.size(); ++r) {
    cumsum += sorted[r];
    const double cand = (cumsum - ball.radius) / static_cast<double>(r + 1);
    if (r + 1 == sorted.size() || sorted[r + 1] <= cand) {
      theta = cand;
      break;
    }
  }
  return (v.array() - theta).max(0.0).matrix();
}

double contraction_qp(double gamma, double alpha, double lp) {
  if (!(lp > 0.0)) {
    throw std::invalid_argument("contraction_qp: lp must be positive");
  }
  if (!(gamma > 0.0 && gamma < 2.0 / lp)) {
    throw std::invalid_argument("contraction_qp: gamma outside (0, 2/lp)");
  }
  if (!(alpha > 0.0 && alpha < lp)) {
    throw std::invalid_argument("contraction_qp: alpha outside (0, lp)");
  }
  return std::max(std::abs(1.0 - gamma * alpha), std::abs(1.0 - gamma * lp));
}

DualRate dual_rate_constants(double rho, double beta, double alpha, double mg) {
  if (!(rho > 0.0) || !(beta > 0.0) || !(alpha > 0.0) || !(mg >= 0.0)) {
    throw std::invalid_argument(
        "dual_rate_constants: rho, beta, alpha must be positive");
  }
  DualRate r;
  r.rho0 = std::min(2.0 * alpha / (mg * mg + 2.0 * alpha * beta),
                    2.0 * beta / (1.0 + beta * beta));
  const double d = 1.0 - rho * beta;
  r.qd = d * d + rho * rho;
  return r;
}

RegParams choose_reg_params(double eps, const BoundsPack& bounds) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("choose_reg_params: eps must be positive");
  }
  const double mhat =
      std::max(bounds.mgj.size() > 0 ? bounds.mgj.maxCoeff() * bounds.mmu : 0.0,
               bounds.mf * bounds.mmu);
  RegParams k;
  k.alpha = 0.9 * 2.0 * eps / (mhat + bounds.mx * bounds.mx);
  k.beta = 0.5 * k.alpha * k.alpha * k.alpha;
  return k;
}

ErrorBounds error_bounds(const RegParams& k, const BoundsPack& bounds) {
  if (!(k.alpha > 0.0) || !(k.beta > 0.0)) {
    throw std::invalid_argument("error_bounds: alpha, beta must be positive");
  }
  const double root = std::sqrt(k.beta / (2.0 * k.alpha));
  ErrorBounds e;
  e.cost = bounds.mf * bounds.mmu * root +
           0.5 * k.alpha * bounds.mx * bounds.mx;
  e.violation = bounds.mgj * (bounds.mmu * root);
  return e;
}

}  // namespace apd
