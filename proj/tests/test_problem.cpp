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

#include <cmath>
#include <random>
#include <set>

#include "apd/bounds.hpp"
#include "apd/experiments.hpp"
#include "apd/problem.hpp"
#include "doctest.h"

using namespace apd;

namespace {

VectorXd random_interior(const BoxSet& box, std::mt19937_64& rng) {
  VectorXd x(box.dim());
  for (int i = 0; i < box.dim(); ++i) {
    const double u = 0.05 + 0.9 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    x[i] = box.lo[i] + u * (box.up[i] - box.lo[i]);
  }
  return x;
}

}  // namespace

TEST_CASE("essential neighborhoods of the four-agent pairs problem") {
  const ProblemSpec p = make_four_agent_pairs_problem();
  validate(p);
  const auto nb = essential_neighborhoods(p);
  CHECK(nb[0] == std::vector<int>{1});
  CHECK(nb[1] == std::vector<int>{0});
  CHECK(nb[2] == std::vector<int>{3});
  CHECK(nb[3] == std::vector<int>{2});
}

TEST_CASE("fully separable problem has empty neighborhoods") {
  const VectorXd w = VectorXd::Ones(3);
  const VectorXd tgt = VectorXd::Zero(3);
  MatrixXd a = MatrixXd::Identity(3, 3);  // each constraint touches one agent
  const VectorXd b = VectorXd::Ones(3);
  const ProblemSpec p = make_quadratic_problem(w, tgt, a, b, BoxSet::cube(3, 0, 2),
                                               VectorXd::Zero(3), 0.0);
  for (const auto& n : essential_neighborhoods(p)) CHECK(n.empty());
}

TEST_CASE("flow neighborhoods equal brute-force path overlaps") {
  const FlowRoutingConfig cfg;
  const ProblemSpec p = build_flow_problem(cfg);
  validate(p);
  const auto nb = essential_neighborhoods(p);
  for (int i = 0; i < 8; ++i) {
    std::set<int> expect;
    const std::set<int> pi(cfg.paths[i].begin(), cfg.paths[i].end());
    for (int j = 0; j < 8; ++j) {
      if (i == j) continue;
      for (int e : cfg.paths[j]) {
        if (pi.count(e)) {
          expect.insert(j);
          break;
        }
      }
    }
    CHECK(std::set<int>(nb[i].begin(), nb[i].end()) == expect);
  }
  // symmetry
  for (int i = 0; i < 8; ++i) {
    for (int j : nb[i]) {
      CHECK(std::find(nb[j].begin(), nb[j].end(), i) != nb[j].end());
    }
  }
}

TEST_CASE("neighborhoods are invariant under agent relabeling") {
  FlowRoutingConfig cfg;
  const auto nb = essential_neighborhoods(build_flow_problem(cfg));
  const std::vector<int> perm = {3, 0, 6, 1, 7, 2, 5, 4};
  FlowRoutingConfig permuted = cfg;
  for (int i = 0; i < 8; ++i) permuted.paths[i] = cfg.paths[perm[i]];
  const auto nb2 = essential_neighborhoods(build_flow_problem(permuted));
  std::vector<int> inv(8);
  for (int i = 0; i < 8; ++i) inv[perm[i]] = i;
  for (int i = 0; i < 8; ++i) {
    std::set<int> mapped;
    for (int j : nb[perm[i]]) mapped.insert(inv[j]);
    CHECK(std::set<int>(nb2[i].begin(), nb2[i].end()) == mapped);
  }
}

TEST_CASE("asymmetric declared sparsity is rejected") {
  ProblemSpec p = make_four_agent_pairs_problem();
  p.sparsity[0][2] = true;  // not mirrored
  CHECK_THROWS_AS(essential_neighborhoods(p), std::invalid_argument);
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
}

TEST_CASE("flow adjacency matches the path table") {
  const FlowRoutingConfig cfg;
  const MatrixXd a = flow_adjacency(cfg);
  // agent 8 uses edges e7 and e4
  for (int e = 0; e < 9; ++e) {
    CHECK(a(e, 7) == ((e == 6 || e == 3) ? 1.0 : 0.0));
  }
  const VectorXd lengths = a.colwise().sum();
  const VectorXd expect = (VectorXd(8) << 3, 3, 4, 3, 5, 3, 4, 2).finished();
  CHECK((lengths - expect).norm() == 0.0);
  const VectorXd loads = a.rowwise().sum();
  const VectorXd expect_loads = (VectorXd(9) << 2, 2, 3, 5, 3, 3, 5, 2, 2).finished();
  CHECK((loads - expect_loads).norm() == 0.0);
}

TEST_CASE("dual ball radius: direct formula") {
  // f(xbar) = 1 with xbar = 0, f_lb = 0, min_j(-g_j(xbar)) = 0.5 -> B = 2
  ProblemSpec p;
  p.name = "tiny";
  p.blocks = BlockPartition::uniform(1, 1);
  p.box = BoxSet::cube(1, -1.0, 1.0);
  p.num_constraints = 1;
  p.fi_value = [](int, Eigen::Ref<const VectorXd> xi) { return xi[0] + 1.0; };
  p.fi_grad = [](int, Eigen::Ref<const VectorXd>) {
    return VectorXd::Ones(1).eval();
  };
  p.g_value = [](const VectorXd& x) {
    return VectorXd::Constant(1, x[0] - 0.5);
  };
  p.g_jacobian = [](const VectorXd&) { return MatrixXd::Ones(1, 1); };
  p.g_jtmu_block = [](int, const VectorXd&, const VectorXd& mu) {
    return VectorXd::Constant(1, mu[0]);
  };
  p.sparsity = {{true}};
  p.slater_point = VectorXd::Zero(1);
  p.f_lower_bound = 0.0;
  CHECK(dual_ball_radius(p, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(dual_ball_radius(p, 7.0) == doctest::Approx(2.0).epsilon(1e-14));

  // infeasible Slater point is rejected
  p.slater_point = VectorXd::Constant(1, 0.9);
  CHECK_THROWS_AS(dual_ball_radius(p, 1.0), std::invalid_argument);
}

TEST_CASE("dual ball radius: two-agent gap problem variants") {
  // canonical configuration reproduces B = 25.002
  const ProblemSpec canonical = make_two_agent_gap_problem();
  CHECK(dual_ball_radius(canonical, 0.01) ==
        doctest::Approx(25.002).epsilon(1e-12));
  // alternative Slater data: xbar = (2.5, 2.5), f_lb = min f over X = -0.5
  const ProblemSpec alt =
      make_two_agent_gap_problem(Eigen::Vector2d(2.5, 2.5), -0.5);
  // f_lb cross-check by corner enumeration of the linear cost
  double corner_min = 1e300;
  for (double a : {0.0, 5.0}) {
    for (double b : {0.0, 5.0}) corner_min = std::min(corner_min, 0.1 * a - 0.1 * b);
  }
  CHECK(corner_min == doctest::Approx(-0.5));
  const double expect = (0.1 * 2.5 - 0.1 * 2.5 + 0.005 * 12.5 + 0.5) / 0.2;
  CHECK(dual_ball_radius(alt, 0.01) == doctest::Approx(expect).epsilon(1e-13));
  CHECK(expect == doctest::Approx(2.8125).epsilon(1e-13));
}

TEST_CASE("dual ball radius: flow problem is positive and monotone") {
  const ProblemSpec p = build_flow_problem(FlowRoutingConfig{});
  double prev = 0.0;
  for (double a : {0.001, 0.01, 0.1, 1.0}) {
    const double b = dual_ball_radius(p, a);
    CHECK(b > 0.0);
    CHECK(b > prev);
    prev = b;
  }
  // monotone in f(xbar) - f_lb
  ProblemSpec deeper = p;
  deeper.f_lower_bound = p.f_lower_bound - 100.0;
  CHECK(dual_ball_radius(deeper, 0.1) > dual_ball_radius(p, 0.1));
}

TEST_CASE("compute_bounds: pure regularizer on [0,1]") {
  const ProblemSpec p = make_zero_problem(1);
  const BoundsPack b = compute_bounds(p, 1.0);
  CHECK(b.lp == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b.mx == doctest::Approx(1.0));
  CHECK(b.dx == doctest::Approx(1.0));
  CHECK(b.lx == doctest::Approx(1.0));
}

TEST_CASE("compute_bounds: two-agent gap problem reproduces lp = 50.014") {
  const ProblemSpec p = make_two_agent_gap_problem();
  const BoundsPack b = compute_bounds(p, 0.01);
  CHECK(b.lp == doctest::Approx(50.014).epsilon(1e-12));
  CHECK(b.mg == doctest::Approx(5.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(b.mx == doctest::Approx(std::sqrt(50.0)).epsilon(1e-14));
  CHECK(b.lx == doctest::Approx(5.0));
}

TEST_CASE("compute_bounds: flow constants in closed form") {
  const ProblemSpec p = build_flow_problem(FlowRoutingConfig{});
  const BoundsPack b = compute_bounds(p, 0.1);
  CHECK(b.mx == doctest::Approx(10.0 * std::sqrt(8.0)).epsilon(1e-14));
  CHECK(b.dx == doctest::Approx(10.0 * std::sqrt(8.0)).epsilon(1e-14));
  CHECK(b.lx == doctest::Approx(10.0));
  CHECK(b.lp == doctest::Approx(101.23453275402138 + 0.1).epsilon(1e-12));
  // Mgj are the edge-load root norms
  const VectorXd loads = (VectorXd(9) << 2, 2, 3, 5, 3, 3, 5, 2, 2).finished();
  CHECK((b.mgj - loads.cwiseSqrt()).norm() < 1e-14);
  CHECK(b.curv_min > 0.8);

  // Mx check against random sampling: no sampled point beats the corner
  std::mt19937_64 rng(11);
  for (int s = 0; s < 1000; ++s) {
    CHECK(random_interior(p.box, rng).norm() <= b.mx);
  }
  // Mf attained at the origin corner
  CHECK(b.mf == doctest::Approx(100.0 * std::sqrt(8.0)).epsilon(1e-12));
  CHECK(f_grad(p, VectorXd::Zero(8)).norm() ==
        doctest::Approx(b.mf).epsilon(1e-12));
}

TEST_CASE("gradient oracles match central finite differences") {
  std::mt19937_64 rng(5);
  const std::vector<ProblemSpec> problems = {
      build_flow_problem(FlowRoutingConfig{}), make_two_agent_gap_problem(),
      make_four_agent_pairs_problem()};
  for (const ProblemSpec& p : problems) {
    for (int s = 0; s < 20; ++s) {
      const VectorXd x = random_interior(p.box, rng);
      const double h = 1e-6 * (1.0 + x.norm());
      const VectorXd g = f_grad(p, x);
      for (int i = 0; i < p.dim(); ++i) {
        VectorXd xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const double fd = (f_value(p, xp) - f_value(p, xm)) / (2.0 * h);
        CHECK(std::abs(g[i] - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST_CASE("slater violation and box violations are rejected at validate") {
  FlowRoutingConfig cfg;
  cfg.slater_value = 3.0;  // A xbar has a component 15 > 10: not feasible
  const ProblemSpec p = build_flow_problem(cfg);
  CHECK_THROWS_AS(validate(p), std::invalid_argument);

  BoxSet bad;
  bad.lo = VectorXd::Ones(2);
  bad.up = VectorXd::Zero(2);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
