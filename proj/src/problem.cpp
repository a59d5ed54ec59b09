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

#include "apd/problem.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/SVD>

namespace apd {

BlockPartition BlockPartition::from_sizes(const std::vector<int>& block_sizes) {
  BlockPartition p;
  p.sizes = block_sizes;
  p.offsets.resize(block_sizes.size());
  int off = 0;
  for (std::size_t i = 0; i < block_sizes.size(); ++i) {
    if (block_sizes[i] <= 0) {
      throw std::invalid_argument("BlockPartition: block size must be positive");
    }
    p.offsets[i] = off;
    off += block_sizes[i];
  }
  p.total = off;
  return p;
}

BlockPartition BlockPartition::uniform(int num_agents, int block_size) {
  return from_sizes(std::vector<int>(num_agents, block_size));
}

BoxSet BoxSet::cube(int n, double lo_val, double up_val) {
  BoxSet b;
  b.lo = VectorXd::Constant(n, lo_val);
  b.up = VectorXd::Constant(n, up_val);
  return b;
}

bool BoxSet::contains(const VectorXd& v, double tol) const {
  return (v.array() >= lo.array() - tol).all() &&
         (v.array() <= up.array() + tol).all();
}

void BoxSet::validate() const {
  if (lo.size() != up.size()) {
    throw std::invalid_argument("BoxSet: lo/up dimension mismatch");
  }
  if (!(lo.array() <= up.array()).all()) {
    throw std::invalid_argument("BoxSet: lo > up in some coordinate");
  }
  if (!lo.allFinite() || !up.allFinite()) {
    throw std::invalid_argument("BoxSet: bounds must be finite");
  }
}

double f_value(const ProblemSpec& p, const VectorXd& x) {
  double v = p.c_value ? p.c_value(x) : 0.0;
  for (int i = 0; i < p.agents(); ++i) {
    v += p.fi_value(i, p.blocks.block(x, i));
  }
  return v;
}

VectorXd f_grad_block(const ProblemSpec& p, int i, const VectorXd& x) {
  VectorXd g = p.fi_grad(i, p.blocks.block(x, i));
  if (p.c_grad_block) g += p.c_grad_block(i, x);
  return g;
}

VectorXd f_grad(const ProblemSpec& p, const VectorXd& x) {
  VectorXd g(p.dim());
  for (int i = 0; i < p.agents(); ++i) {
    p.blocks.block(g, i) = f_grad_block(p, i, x);
  }
  return g;
}

void validate(const ProblemSpec& p) {
  p.box.validate();
  if (p.box.dim() != p.dim()) {
    throw std::invalid_argument("ProblemSpec: box dimension != block total");
  }
  const int n_agents = p.agents();
  if (static_cast<int>(p.sparsity.size()) != n_agents) {
    throw std::invalid_argument("ProblemSpec: sparsity must be N x N");
  }
  for (const auto& row : p.sparsity) {
    if (static_cast<int>(row.size()) != n_agents) {
      throw std::invalid_argument("ProblemSpec: sparsity must be N x N");
    }
  }
  for (int i = 0; i < n_agents; ++i) {
    for (int j = 0; j < n_agents; ++j) {
      if (i != j && p.sparsity[i][j] != p.sparsity[j][i]) {
        throw std::invalid_argument("ProblemSpec: sparsity is not symmetric");
      }
    }
  }
  if (p.slater_point.size() != p.dim()) {
    throw std::invalid_argument("ProblemSpec: slater_point dimension mismatch");
  }
  if (!p.box.contains(p.slater_point)) {
    throw std::invalid_argument("ProblemSpec: slater_point outside the box");
  }
  if (p.num_constraints > 0) {
    const VectorXd gx = p.g_value(p.slater_point);
    if (gx.size() != p.num_constraints) {
      throw std::invalid_argument("ProblemSpec: g dimension != num_constraints");
    }
    if (!(gx.array() < 0.0).all()) {
      throw std::invalid_argument(
          "ProblemSpec: slater_point is not strictly feasible (g(xbar) < 0 "
          "fails)");
    }
  }
  if (!std::isfinite(p.f_lower_bound)) {
    throw std::invalid_argument("ProblemSpec: f_lower_bound must be finite");
  }
}

std::vector<std::vector<int>> essential_neighborhoods(const ProblemSpec& p) {
  const int n_agents = p.agents();
  for (int i = 0; i < n_agents; ++i) {
    for (int j = 0; j < n_agents; ++j) {
      if (i != j && p.sparsity[i][j] != p.sparsity[j][i]) {
        throw std::invalid_argument(
            "essential_neighborhoods: declared sparsity is not symmetric");
      }
    }
  }
  std::vector<std::vector<int>> out(n_agents);
  for (int i = 0; i < n_agents; ++i) {
    for (int j = 0; j < n_agents; ++j) {
      if (i != j && p.sparsity[i][j]) out[i].push_back(j);
    }
  }
  return out;
}

// ---- families --------------------------------------------------------------

ProblemSpec make_quadratic_problem(const VectorXd& weights,
                                   const VectorXd& targets, const MatrixXd& A,
                                   const VectorXd& b, const BoxSet& box,
                                   const VectorXd& slater, double f_lb) {
  const int n = static_cast<int>(weights.size());
  ProblemSpec p;
  p.name = "quadratic";
  p.blocks = BlockPartition::uniform(n, 1);
  p.box = box;
  p.num_constraints = static_cast<int>(b.size());
  p.fi_value = [weights, targets](int i, Eigen::Ref<const VectorXd> xi) {
    const double d = xi[0] - targets[i];
    return 0.5 * weights[i] * d * d;
  };
  p.fi_grad = [weights, targets](int i, Eigen::Ref<const VectorXd> xi) {
    VectorXd g(1);
    g[0] = weights[i] * (xi[0] - targets[i]);
    return g;
  };
  if (p.num_constraints > 0) {
    p.g_value = [A, b](const VectorXd& x) -> VectorXd { return A * x - b; };
    p.g_jacobian = [A](const VectorXd&) { return A; };
    p.g_jtmu_block = [A](int i, const VectorXd&, const VectorXd& mu) {
      VectorXd out(1);
      out[0] = A.col(i).dot(mu);
      return out;
    };
  }
  p.sparsity.assign(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) p.sparsity[i][i] = true;
  // affine g does not couple agents through grad_x L; only c would, and c == 0
  p.slater_point = slater;
  p.f_lower_bound = f_lb;
  p.hints.f_curv_min = weights.minCoeff();
  p.hints.f_curv_max = weights.maxCoeff();
  p.hints.g_curv_max = 0.0;
  if (p.num_constraints > 0) {
    p.hints.grad_g_norm_max =
        A.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV)
            .singularValues()(0);
    p.hints.grad_gj_norm_max = A.rowwise().norm();
  } else {
    p.hints.grad_g_norm_max = 0.0;
  }
  return p;
}

ProblemSpec make_four_agent_pairs_problem(double, double slack) {
  ProblemSpec p;
  p.name = "four-agent-pairs";
  p.blocks = BlockPartition::uniform(4, 1);
  p.box = BoxSet::cube(4, 0.0, 10.0);
  p.num_constraints = 2;
  p.fi_value = [](int, Eigen::Ref<const VectorXd> xi) {
    return 0.5 * xi[0] * xi[0];
  };
  p.fi_grad = [](int, Eigen::Ref<const VectorXd> xi) {
    VectorXd g(1);
    g[0] = xi[0];
    return g;
  };
  p.g_value = [slack](const VectorXd& x) {
    VectorXd g(2);
    g[0] = 0.5 * (x[0] - x[1]) * (x[0] - x[1]) - slack;
    g[1] = 0.5 * (x[2] - x[3]) * (x[2] - x[3]) - slack;
    return g;
  };
  p.g_jacobian = [](const VectorXd& x) {
    MatrixXd J = MatrixXd::Zero(2, 4);
    J(0, 0) = x[0] - x[1];
    J(0, 1) = x[1] - x[0];
    J(1, 2) = x[2] - x[3];
    J(1, 3) = x[3] - x[2];
    return J;
  };
  p.g_jtmu_block = [](int i, const VectorXd& x, const VectorXd& mu) {
    VectorXd out(1);
    switch (i) {
      case 0: out[0] = mu[0] * (x[0] - x[1]); break;
      case 1: out[0] = mu[0] * (x[1] - x[0]); break;
      case 2: out[0] = mu[1] * (x[2] - x[3]); break;
      default: out[0] = mu[1] * (x[3] - x[2]); break;
    }
    return out;
  };
  p.sparsity = {{true, true, false, false},
                {true, true, false, false},
                {false, false, true, true},
                {false, false, true, true}};
  p.slater_point = VectorXd::Ones(4);
  p.f_lower_bound = 0.0;
  p.hints.f_curv_min = 1.0;
  p.hints.f_curv_max = 1.0;
  p.hints.g_curv_max = 2.0;  // eigenvalues of [[1,-1],[-1,1]] are {0, 2}
  return p;
}

ProblemSpec make_two_agent_gap_problem(const Eigen::Vector2d& slater,
                                       double f_lb) {
  ProblemSpec p;
  p.name = "two-agent-gap";
  p.blocks = BlockPartition::uniform(2, 1);
  p.box = BoxSet::cube(2, 0.0, 5.0);
  p.num_constraints = 1;
  p.fi_value = [](int i, Eigen::Ref<const VectorXd> xi) {
    return i == 0 ? 0.1 * xi[0] : -0.1 * xi[0];
  };
  p.fi_grad = [](int i, Eigen::Ref<const VectorXd>) {
    VectorXd g(1);
    g[0] = i == 0 ? 0.1 : -0.1;
    return g;
  };
  p.g_value = [](const VectorXd& x) {
    VectorXd g(1);
    g[0] = 0.5 * (x[0] - x[1]) * (x[0] - x[1]) - 0.2;
    return g;
  };
  p.g_jacobian = [](const VectorXd& x) {
    MatrixXd J(1, 2);
    J(0, 0) = x[0] - x[1];
    J(0, 1) = x[1] - x[0];
    return J;
  };
  p.g_jtmu_block = [](int i, const VectorXd& x, const VectorXd& mu) {
    VectorXd out(1);
    out[0] = i == 0 ? mu[0] * (x[0] - x[1]) : mu[0] * (x[1] - x[0]);
    return out;
  };
  p.sparsity = {{true, true}, {true, true}};
  p.slater_point = slater;
  p.f_lower_bound = f_lb;
  p.hints.f_curv_min = 0.0;
  p.hints.f_curv_max = 0.0;
  p.hints.g_curv_max = 2.0;
  p.hints.grad_f_norm_max = std::sqrt(0.02);  // constant gradient (0.1, -0.1)
  p.hints.grad_g_norm_max = 5.0 * std::sqrt(2.0);
  p.hints.grad_gj_norm_max = VectorXd::Constant(1, 5.0 * std::sqrt(2.0));
  return p;
}

ProblemSpec make_zero_problem(int n) {
  ProblemSpec p;
  p.name = "zero";
  p.blocks = BlockPartition::uniform(n, 1);
  p.box = BoxSet::cube(n, 0.0, 1.0);
  p.num_constraints = 0;
  p.fi_value = [](int, Eigen::Ref<const VectorXd>) { return 0.0; };
  p.fi_grad = [](int, Eigen::Ref<const VectorXd>) {
    return VectorXd::Zero(1).eval();
  };
  p.sparsity.assign(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) p.sparsity[i][i] = true;
  p.slater_point = VectorXd::Constant(n, 0.5);
  p.f_lower_bound = 0.0;
  p.hints.f_curv_min = 0.0;
  p.hints.f_curv_max = 0.0;
  p.hints.g_curv_max = 0.0;
  p.hints.grad_f_norm_max = 0.0;
  p.hints.grad_g_norm_max = 0.0;
  return p;
}

}  // namespace apd
