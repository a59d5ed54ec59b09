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

#ifndef APD_PROBLEM_HPP_
#define APD_PROBLEM_HPP_

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace apd {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Partition of R^n into N contiguous agent blocks.
struct BlockPartition {
  std::vector<int> offsets;
  std::vector<int> sizes;
  int total = 0;

  static BlockPartition from_sizes(const std::vector<int>& block_sizes);
  static BlockPartition uniform(int num_agents, int block_size = 1);

  int agents() const { return static_cast<int>(sizes.size()); }
  int offset(int i) const { return offsets[i]; }
  int size(int i) const { return sizes[i]; }

  Eigen::Ref<const VectorXd> block(const VectorXd& v, int i) const {
    return v.segment(offsets[i], sizes[i]);
  }
  Eigen::Ref<VectorXd> block(VectorXd& v, int i) const {
    return v.segment(offsets[i], sizes[i]);
  }
};

// Cartesian product of per-coordinate intervals; must be bounded and nonempty.
struct BoxSet {
  VectorXd lo;
  VectorXd up;

  static BoxSet cube(int n, double lo_val, double up_val);
  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const VectorXd& v, double tol = 0.0) const;
  void validate() const;
};

// A constrained convex problem: per-agent costs f_i, coupling cost c,
// inequality constraints g(x) <= 0 (m components), a box set, the declared
// coupling sparsity, a Slater point, and a lower bound on min_X f.
//
// Oracles must provide analytic gradients. The declared sparsity pattern is
// authoritative: pattern(i,j) says whether grad of block j depends on block i,
// and per-block gradient oracles must never read blocks outside it.
//
// Instances are immutable after construction and safe to share across threads.
struct ProblemSpec {
  std::string name;
  BlockPartition blocks;
  BoxSet box;
  int num_constraints = 0;

  // Per-agent cost: value and gradient in the agent's own block.
  std::function<double(int, Eigen::Ref<const VectorXd>)> fi_value;
  std::function<VectorXd(int, Eigen::Ref<const VectorXd>)> fi_grad;

  // Coupling cost (may be null => identically zero).
  std::function<double(const VectorXd&)> c_value;
  std::function<VectorXd(int, const VectorXd&)> c_grad_block;

  // Constraints: values, full Jacobian (m x n), and the hot-path kernel
  // (J_g(x)^T mu) restricted to block i.
  std::function<VectorXd(const VectorXd&)> g_value;
  std::function<MatrixXd(const VectorXd&)> g_jacobian;
  std::function<VectorXd(int, const VectorXd&, const VectorXd&)> g_jtmu_block;

  // Symmetric N x N coupling pattern (diagonal entries are ignored).
  std::vector<std::vector<bool>> sparsity;

  VectorXd slater_point;
  double f_lower_bound = -std::numeric_limits<double>::infinity();

  // Optional closed-form constants over X used by compute_bounds; NaN = absent.
  struct Hints {
    double f_curv_min = std::numeric_limits<double>::quiet_NaN();
    double f_curv_max = std::numeric_limits<double>::quiet_NaN();
    double g_curv_max = std::numeric_limits<double>::quiet_NaN();
    double grad_f_norm_max = std::numeric_limits<double>::quiet_NaN();
    double grad_g_norm_max = std::numeric_limits<double>::quiet_NaN();
    VectorXd grad_gj_norm_max;  // size m, or empty
  } hints;

  int dim() const { return blocks.total; }
  int agents() const { return blocks.agents(); }
};

// f(x) = c(x) + sum_i f_i(x_i).
double f_value(const ProblemSpec& p, const VectorXd& x);

// Full gradient of f, assembled block by block (bitwise equal to the
// concatenation of f_grad_block calls).
VectorXd f_grad(const ProblemSpec& p, const VectorXd& x);
VectorXd f_grad_block(const ProblemSpec& p, int i, const VectorXd& x);

// Throws std::invalid_argument naming the offending field if the spec is
// malformed: bad box, asymmetric sparsity, Slater violation, dim mismatches.
void validate(const ProblemSpec& p);

// N_i = { j != i : pattern(i,j) }. Throws on asymmetric declared sparsity.
std::vector<std::vector<int>> essential_neighborhoods(const ProblemSpec& p);

// ---- built-in problem families -------------------------------------------

// Separable quadratic: f_i(x_i) = 0.5*w_i*(x_i - target_i)^2 on scalar blocks,
// optional affine constraints g(x) = A x - b.
ProblemSpec make_quadratic_problem(const VectorXd& weights,
                                   const VectorXd& targets, const MatrixXd& A,
                                   const VectorXd& b, const BoxSet& box,
                                   const VectorXd& slater, double f_lb);

// Four scalar agents with f_i = 0.5*x_i^2 and two pairwise quadratic
// constraints g_1 = 0.5*(x_1-x_2)^2 - slack, g_2 = 0.5*(x_3-x_4)^2 - slack.
// Agents {1,2} and {3,4} are each other's only essential neighbors.
ProblemSpec make_four_agent_pairs_problem(double alpha_hint = 0.0,
                                          double slack = 0.2);

// Two scalar agents, f_1 = 0.1*x_1, f_2 = -0.1*x_2,
// g = 0.5*(x_1-x_2)^2 - 0.2 on X = [0,5]^2.
// Slater point and f lower bound are configurable; the canonical choice
// (0.2, 0.2) with f_lb = -5 makes dual_ball_radius(., 0.01) = 25.002.
ProblemSpec make_two_agent_gap_problem(
    const Eigen::Vector2d& slater = Eigen::Vector2d(0.2, 0.2),
    double f_lb = -5.0);

// Fully separable sanity problem: f == 0, c == 0, no constraints, X = [0,1]^n.
ProblemSpec make_zero_problem(int n = 1);

}  // namespace apd

#endif  // APD_PROBLEM_HPP_
