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

#include "apd/bounds.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace apd {

double dual_ball_radius(const ProblemSpec& p, double alpha) {
  if (alpha <= 0.0) {
    throw std::invalid_argument("dual_ball_radius: alpha must be positive");
  }
  if (p.num_constraints == 0) return 0.0;
  const VectorXd& xbar = p.slater_point;
  const VectorXd gbar = p.g_value(xbar);
  const double margin = (-gbar).minCoeff();
  if (margin <= 0.0) {
    throw std::invalid_argument(
        "dual_ball_radius: slater_point is not strictly feasible");
  }
  const double numer =
      f_value(p, xbar) + 0.5 * alpha * xbar.squaredNorm() - p.f_lower_bound;
  if (numer <= 0.0) {
    throw std::invalid_argument(
        "dual_ball_radius: f_lower_bound exceeds f at the Slater point");
  }
  return numer / margin;
}

DualBall dual_ball(const ProblemSpec& p, double alpha) {
  return DualBall{dual_ball_radius(p, alpha), p.num_constraints};
}

namespace {

// Low-discrepancy interior points plus all box corners when affordable.
std::vector<VectorXd> sample_points(const BoxSet& box, int samples,
                                    std::uint64_t seed) {
  std::vector<VectorXd> pts;
  const int n = box.dim();
  if (n <= 12) {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      VectorXd v(n);
      for (int i = 0; i < n; ++i) {
        v[i] = (mask >> i) & 1u ? box.up[i] : box.lo[i];
      }
      pts.push_back(std::move(v));
    }
  }
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    VectorXd v(n);
    for (int i = 0; i < n; ++i) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      v[i] = box.lo[i] + u * (box.up[i] - box.lo[i]);
    }
    pts.push_back(std::move(v));
  }
  return pts;
}

double spectral_norm(const MatrixXd& m) {
  return m.jacobiSvd().singularValues()(0);
}

}  // namespace

BoundsPack compute_bounds(const ProblemSpec& p, double alpha, int samples) {
  if (alpha <= 0.0) {
    throw std::invalid_argument("compute_bounds: alpha must be positive");
  }
  BoundsPack b;
  const BoxSet& box = p.box;

  // Box geometry is exact.
  b.mx = box.lo.cwiseAbs().cwiseMax(box.up.cwiseAbs()).norm();
  b.dx = (box.up - box.lo).norm();
  b.lx = 0.0;
  const VectorXd widths = box.up - box.lo;
  for (int i = 0; i < p.agents(); ++i) {
    b.lx = std::max(b.lx, p.blocks.block(widths, i).norm());
  }
  b.mmu = dual_ball_radius(p, alpha);

  const bool need_grad_f = !std::isfinite(p.hints.grad_f_norm_max);
  const bool need_grad_g =
      p.num_constraints > 0 && (!std::isfinite(p.hints.grad_g_norm_max) ||
                                p.hints.grad_gj_norm_max.size() == 0);
  std::vector<VectorXd> pts;
  if (need_grad_f || need_grad_g) {
    pts = sample_points(box, samples, /*seed=*/0x9e3779b97f4a7c15ull);
    b.sampled = true;
  }

  if (!need_grad_f) {
    b.mf = p.hints.grad_f_norm_max;
  } else {
    b.mf = 0.0;
    for (const auto& x : pts) b.mf = std::max(b.mf, f_grad(p, x).norm());
  }

  if (p.num_constraints == 0) {
    b.mg = 0.0;
    b.mgj = VectorXd();
  } else if (!need_grad_g) {
    b.mg = p.hints.grad_g_norm_max;
    b.mgj = p.hints.grad_gj_norm_max;
  } else {
    b.mg = 0.0;
    b.mgj = VectorXd::Zero(p.num_constraints);
    for (const auto& x : pts) {
      const MatrixXd J = p.g_jacobian(x);
      b.mg = std::max(b.mg, spectral_norm(J));
      for (int j = 0; j < p.num_constraints; ++j) {
        b.mgj[j] = std::max(b.mgj[j], J.row(j).norm());
      }
    }
  }

  // lp = sup eig(hess f) + alpha + B * max_j sup eig(hess g_j). Curvature
  // hints are required for the closed form; the fallback estimates the f part
  // by finite-differencing the gradient along coordinate directions, which is
  // exact for the quadratic-plus-diagonal families and conservative enough
  // elsewhere (flagged sampled).
  double f_curv_max;
  double g_curv_max;
  if (std::isfinite(p.hints.f_curv_max)) {
    f_curv_max = p.hints.f_curv_max;
    b.curv_min = std::isfinite(p.hints.f_curv_min) ? p.hints.f_curv_min : 0.0;
  } else {
    b.sampled = true;
    if (pts.empty()) pts = sample_points(box, samples, 0x9e3779b97f4a7c15ull);
    f_curv_max = 0.0;
    b.curv_min = 0.0;
    const int n = p.dim();
    for (std::size_t s = 0; s < std::min<std::size_t>(pts.size(), 256); ++s) {
      const VectorXd& x = pts[s];
      MatrixXd h(n, n);
      const double step = 1e-5 * (1.0 + x.norm());
      for (int j = 0; j < n; ++j) {
        VectorXd xp = x, xm = x;
        xp[j] = std::min(xp[j] + step, box.up[j]);
        xm[j] = std::max(xm[j] - step, box.lo[j]);
        const double d = xp[j] - xm[j];
        h.col(j) = d > 0 ? ((f_grad(p, xp) - f_grad(p, xm)) / d).eval()
                         : VectorXd::Zero(n).eval();
      }
      const MatrixXd hs = 0.5 * (h + h.transpose());
      const Eigen::SelfAdjointEigenSolver<MatrixXd> es(hs);
      f_curv_max = std::max(f_curv_max, es.eigenvalues().maxCoeff());
    }
  }
  if (std::isfinite(p.hints.g_curv_max)) {
    g_curv_max = p.hints.g_curv_max;
  } else {
    // Affine constraints need no estimate; others must declare curvature.
    throw std::invalid_argument(
        "compute_bounds: g_curv_max hint required for non-affine constraints");
  }
  b.lp = f_curv_max + alpha + b.mmu * g_curv_max;
  return b;
}

}  // namespace apd
