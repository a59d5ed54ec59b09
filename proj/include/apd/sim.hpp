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

#ifndef APD_SIM_HPP_
#define APD_SIM_HPP_

#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "apd/bounds.hpp"
#include "apd/problem.hpp"
#include "apd/reg.hpp"
#include "apd/schedule.hpp"
#include "apd/sync.hpp"

namespace apd {

// Reference saddle points used for trace norms and rate bounds.
struct SaddleRefs {
  VectorXd x_reg;
  VectorXd mu_reg;
  std::optional<VectorXd> x_unreg;
  std::optional<VectorXd> mu_unreg;
};

// One row per cloud round.
struct TraceRow {
  std::int64_t t = 0;     // round index
  Tick k_t = 0;           // first tick of the round
  int cycles = 0;         // c(t)
  int fresh = 0;          // N(t), agents whose upload was used
  double err_x_reg = std::numeric_limits<double>::quiet_NaN();
  double err_x_unreg = std::numeric_limits<double>::quiet_NaN();
  double err_mu_reg = std::numeric_limits<double>::quiet_NaN();
  double err_mu_unreg = std::numeric_limits<double>::quiet_NaN();
  double max_g = std::numeric_limits<double>::quiet_NaN();
  double dual_bound_sq = std::numeric_limits<double>::quiet_NaN();  // on ||mu(t)-mu_k||^2
  double primal_bound = std::numeric_limits<double>::quiet_NaN();  // on ||x^c_t-x_k||
  // Filled only when round targets are tracked:
  double d_kt = std::numeric_limits<double>::quiet_NaN();         // D(k_t)
  double bmax_xc_target = std::numeric_limits<double>::quiet_NaN();  // |x^c_t - xhat^t|_bmax
  double l2_xc_target = std::numeric_limits<double>::quiet_NaN();    // ||x^c_t - xhat^t||_2
  double max_agent_bmax = std::numeric_limits<double>::quiet_NaN();  // round-end copies vs xhat^t
};

struct SimEvent {
  enum class Kind : std::uint8_t {
    kUpdate,
    kSend,
    kDeliver,
    kDiscard,
    kUpload,
    kDualUpdate
  };
  Kind kind;
  Tick tick = 0;
  std::int64_t round = 0;
  int from = -1;
  int to = -1;
  std::int64_t stamp = 0;  // dual timestamp carried / in force
};

struct RunTrace {
  std::vector<TraceRow> rows;       // stored every `stride` rounds + final
  std::vector<SimEvent> events;     // only when record_events
  double mu0_err_sq = 0.0;          // ||mu(0) - mu_k||^2, kept for bound replay
  std::int64_t rounds_run = 0;
  Tick ticks_run = 0;
  std::int64_t discarded_messages = 0;
  std::int64_t sent_messages = 0;
  bool converged = false;           // stop rule hit before horizon
  std::int64_t converged_round = -1;
  VectorXd final_xc;
  VectorXd final_mu;
  std::uint64_t seed = 0;
  // constants echoed for CSV audit / bound replay
  double alpha = 0, beta = 0, gamma = 0, rho = 0;
  double qp = 0, qd = 0, mg = 0, lx = 0, dx = 0;
  int num_agents = 0;
};

// Synchronized cloud gate: fire only with every agent's block fresh, or with
// any nonempty fresh subset (the partial variant).
enum class CloudGate { kAllFresh, kAnyFresh };

struct SimOptions {
  std::int64_t max_rounds = 500'000;
  CloudGate gate = CloudGate::kAllFresh;
  // Stop once both reference errors fall below this (requires refs).
  double stop_tol = -1.0;
  int stride = 1;  // store every stride-th round (final row always stored)
  bool record_events = false;
  // Per-round inner-target tracking (D(k_t) and contraction columns). Costly.
  bool track_round_targets = false;
  double target_tol = 1e-10;
  std::optional<SaddleRefs> refs;
  // Per-tick observer for equivalence tests: (tick, agent copies, mu, t).
  std::function<void(Tick, const std::vector<VectorXd>&, const VectorXd&,
                     std::int64_t)>
      observer;
};

// Abstract round supplier so long runs can stream schedules without
// materializing them.
class ScheduleSource {
 public:
  virtual ~ScheduleSource() = default;
  virtual RoundSchedule next_round() = 0;
  virtual int num_agents() const = 0;
};

class MaterializedSource : public ScheduleSource {
 public:
  explicit MaterializedSource(const SimSchedule& s) : s_(s) {}
  RoundSchedule next_round() override;
  int num_agents() const override { return s_.num_agents; }

 private:
  const SimSchedule& s_;
  std::size_t next_ = 0;
};

class StreamSource : public ScheduleSource {
 public:
  StreamSource(const ProblemSpec& p, const ScheduleParams& params)
      : stream_(p, params), n_(p.agents()) {}
  RoundSchedule next_round() override { return stream_.next_round(); }
  int num_agents() const override { return n_; }

 private:
  ScheduleStream stream_;
  int n_;
};

// Executes the asynchronous primal-dual loop over the virtual clock. Per tick:
// deliveries (FIFO per channel, stale dual timestamps discarded), then
// gradient updates on agents scheduled at this tick, then sends and cloud
// uploads, then the cloud gate at the round's last tick. The dual update
//   mu(t+1) = P_M[mu(t) + rho (g(x^c_t) - beta mu(t))]
// takes effect for all agents simultaneously at the next round's first tick.
//
// Throws std::invalid_argument on dimension mismatches or step sizes outside
// gamma in (0, 2/lp), rho in (0, rho0).
RunTrace run_async(const ProblemSpec& p, const RegParams& k,
                   const StepSizes& steps, const BoundsPack& bounds,
                   ScheduleSource& schedule, const VectorXd& x0,
                   const VectorXd& mu0, const SimOptions& opts = {});

// Convenience overloads.
RunTrace run_async(const ProblemSpec& p, const RegParams& k,
                   const StepSizes& steps, const BoundsPack& bounds,
                   const SimSchedule& schedule, const VectorXd& x0,
                   const VectorXd& mu0, const SimOptions& opts = {});

// The partial-aggregate variant: the cloud fires with N(t) >= 1 fresh blocks;
// stale blocks keep their previous uploaded values.
RunTrace run_async_partial(const ProblemSpec& p, const RegParams& k,
                           const StepSizes& steps, const BoundsPack& bounds,
                           ScheduleSource& schedule, const VectorXd& x0,
                           const VectorXd& mu0, SimOptions opts = {});

// Cloud dual update law on an explicit aggregate.
VectorXd cloud_dual_update(const VectorXd& mu, const VectorXd& g_of_xc,
                           double rho, double beta, const DualBall& ball);

// Counts completed update-and-exchange cycles in round t of an event log, up
// to the earliest cloud upload that the round's dual update consumed. A cycle
// completes once every agent has updated and a post-update state of every
// agent has been delivered to all its essential neighbors.
int count_cycles(const std::vector<SimEvent>& events,
                 const std::vector<std::vector<int>>& neighborhoods,
                 std::int64_t round);

}  // namespace apd

#endif  // APD_SIM_HPP_
