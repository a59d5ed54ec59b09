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

#include "apd/sim.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

#include "apd/analysis.hpp"

namespace apd {

namespace {

// Message payloads are stored inline; block sizes beyond this are rejected.
constexpr int kMaxBlock = 16;
using BlockVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxBlock, 1>;

struct Message {
  BlockVec value;
  Tick sent = 0;
  Tick deliver = 0;
  std::int64_t stamp = 0;
  std::int64_t sender_update_seq = -1;
};

// Bookkeeping for completed update-and-exchange cycles within one round.
// An update counts toward the current cycle window; a delivery counts if the
// carried value was computed inside the window. When every agent has updated
// and every essential directed channel has delivered, the cycle completes and
// the window restarts at the completing event.
struct CycleTracker {
  int num_agents = 0;
  std::vector<std::pair<int, int>> channels;  // directed essential (from, to)
  std::vector<int> channel_index;             // from * N + to -> index or -1
  std::vector<bool> updated;
  std::vector<bool> delivered;
  int updated_count = 0;
  int delivered_count = 0;
  std::int64_t window_start_seq = -1;
  std::vector<std::int64_t> completion_seqs;  // within current round

  void init(int n, const std::vector<std::vector<int>>& neighbors) {
    num_agents = n;
    channel_index.assign(n * n, -1);
    for (int i = 0; i < n; ++i) {
      for (int j : neighbors[i]) {
        channel_index[i * n + j] = static_cast<int>(channels.size());
        channels.emplace_back(i, j);
      }
    }
    updated.assign(n, false);
    delivered.assign(channels.size(), false);
  }

  void reset_round(std::int64_t seq) {
    std::fill(updated.begin(), updated.end(), false);
    std::fill(delivered.begin(), delivered.end(), false);
    updated_count = 0;
    delivered_count = 0;
    window_start_seq = seq;
    completion_seqs.clear();
  }

  void maybe_complete(std::int64_t seq) {
    if (updated_count == num_agents &&
        delivered_count == static_cast<int>(channels.size())) {
      completion_seqs.push_back(seq);
      std::fill(updated.begin(), updated.end(), false);
      std::fill(delivered.begin(), delivered.end(), false);
      updated_count = 0;
      delivered_count = 0;
      window_start_seq = seq;
    }
  }

  void on_update(int i, std::int64_t seq) {
    if (!updated[i]) {
      updated[i] = true;
      ++updated_count;
    }
    maybe_complete(seq);
  }

  void on_delivery(int from, int to, std::int64_t sender_update_seq,
                   std::int64_t seq) {
    if (sender_update_seq <= window_start_seq) return;  // pre-window value
    const int ch = channel_index[from * num_agents + to];
    if (ch < 0 || delivered[ch]) return;
    delivered[ch] = true;
    ++delivered_count;
    maybe_complete(seq);
  }

  int cycles_before(std::int64_t seq) const {
    int c = 0;
    for (std::int64_t s : completion_seqs) {
      if (s <= seq) ++c;
    }
    return c;
  }
};

}  // namespace

RoundSchedule MaterializedSource::next_round() {
  if (next_ >= s_.rounds.size()) {
    throw std::out_of_range("MaterializedSource: schedule exhausted");
  }
  return s_.rounds[next_++];
}

VectorXd cloud_dual_update(const VectorXd& mu, const VectorXd& g_of_xc,
                           double rho, double beta, const DualBall& ball) {
  return dual_step(mu, g_of_xc, rho, beta, ball);
}

RunTrace run_async(const ProblemSpec& p, const RegParams& k,
                   const StepSizes& steps, const BoundsPack& bounds,
                   ScheduleSource& schedule, const VectorXd& x0,
                   const VectorXd& mu0, const SimOptions& opts) {
  const int n_agents = p.agents();
  const int n = p.dim();
  if (schedule.num_agents() != n_agents) {
    throw std::invalid_argument("run_async: schedule/spec agent count mismatch");
  }
  if (x0.size() != n || mu0.size() != p.num_constraints) {
    throw std::invalid_argument("run_async: x0/mu0 dimension mismatch");
  }
  if (!p.box.contains(x0)) {
    throw std::invalid_argument("run_async: x0 outside X");
  }
  if (!(steps.gamma > 0.0 && steps.gamma < 2.0 / bounds.lp)) {
    throw std::invalid_argument("run_async: gamma outside (0, 2/lp)");
  }
  if (p.num_constraints > 0) {
    const DualRate rate =
        dual_rate_constants(steps.rho, k.beta, k.alpha, bounds.mg);
    if (!(steps.rho > 0.0 && steps.rho < rate.rho0)) {
      throw std::invalid_argument("run_async: rho outside (0, rho0)");
    }
  }
  for (int i = 0; i < n_agents; ++i) {
    if (p.blocks.size(i) > kMaxBlock) {
      throw std::invalid_argument("run_async: block size exceeds kMaxBlock");
    }
  }

  const auto neighbors = essential_neighborhoods(p);
  std::vector<std::vector<int>> essential_blocks(n_agents);
  for (int i = 0; i < n_agents; ++i) {
    essential_blocks[i] = neighbors[i];
    essential_blocks[i].push_back(i);
  }

  const DualBall ball{bounds.mmu, p.num_constraints};
  const double qp = contraction_qp(steps.gamma, k.alpha, bounds.lp);
  RateConsts rate_consts;
  rate_consts.qp = qp;
  rate_consts.num_agents = n_agents;
  rate_consts.mg = bounds.mg;
  rate_consts.lx = bounds.lx;
  rate_consts.dx = bounds.dx;
  rate_consts.rho = steps.rho;
  rate_consts.qd =
      p.num_constraints > 0
          ? dual_rate_constants(steps.rho, k.beta, k.alpha, bounds.mg).qd
          : 0.0;

  RunTrace trace;
  trace.alpha = k.alpha;
  trace.beta = k.beta;
  trace.gamma = steps.gamma;
  trace.rho = steps.rho;
  trace.qp = qp;
  trace.qd = rate_consts.qd;
  trace.mg = bounds.mg;
  trace.lx = bounds.lx;
  trace.dx = bounds.dx;
  trace.num_agents = n_agents;

  // state
  std::vector<VectorXd> copies(n_agents, x0);
  VectorXd mu = mu0;
  std::int64_t t = 0;
  VectorXd xc = x0;
  std::vector<bool> fresh(n_agents, false);
  std::vector<std::int64_t> last_upload_seq(n_agents, -1);
  std::vector<std::int64_t> last_update_seq(n_agents, -1);
  std::vector<std::deque<Message>> channels(n_agents * n_agents);
  std::vector<int> active_channels;
  std::vector<bool> channel_active(n_agents * n_agents, false);
  std::int64_t seq = 0;  // global event sequence counter

  CycleTracker cycles;
  cycles.init(n_agents, neighbors);
  cycles.reset_round(-1);

  const bool want_mu_refs = opts.refs.has_value() && p.num_constraints > 0;
  if (want_mu_refs) {
    trace.mu0_err_sq = (mu0 - opts.refs->mu_reg).squaredNorm();
  }
  double dual_bound_state = trace.mu0_err_sq;  // bound on ||mu(t)-mu_k||^2; exact at 0

  VectorXd xhat_t;
  double d_kt = std::numeric_limits<double>::quiet_NaN();
  auto refresh_round_target = [&]() {
    if (!opts.track_round_targets) return;
    xhat_t = inner_target(p, k, mu, steps.gamma, opts.target_tol,
                          xhat_t.size() == n ? &xhat_t : nullptr);
    d_kt = 0.0;
    for (int i = 0; i < n_agents; ++i) {
      const VectorXd diff = copies[i] - xhat_t;
      d_kt = std::max(
          d_kt, block_max_norm_subset(diff, p.blocks, essential_blocks[i]));
    }
  };
  refresh_round_target();

  auto log_event = [&](SimEvent::Kind kind, Tick tick, int from, int to,
                       std::int64_t stamp) {
    if (!opts.record_events) return;
    SimEvent e;
    e.kind = kind;
    e.tick = tick;
    e.round = t;
    e.from = from;
    e.to = to;
    e.stamp = stamp;
    trace.events.push_back(e);
  };

  bool pending_flip = false;
  VectorXd mu_next;
  bool stop = false;

  while (!stop && trace.rounds_run < opts.max_rounds) {
    const RoundSchedule round = schedule.next_round();
    const Tick k_start = round.start;
    const int len = static_cast<int>(round.ticks.size());

    for (int tau = 0; tau < len && !stop; ++tau) {
      const Tick tick = k_start + tau;

      // 1. deliveries due at this tick, FIFO per channel
      for (std::size_t a = 0; a < active_channels.size();) {
        const int ch = active_channels[a];
        auto& q = channels[ch];
        while (!q.empty() && q.front().deliver <= tick) {
          const Message& m = q.front();
          const int from = ch / n_agents;
          const int to = ch % n_agents;
          if (m.stamp == t) {
            p.blocks.block(copies[to], from) = m.value;
            ++seq;
            cycles.on_delivery(from, to, m.sender_update_seq, seq);
            log_event(SimEvent::Kind::kDeliver, tick, from, to, m.stamp);
          } else {
            ++trace.discarded_messages;
            log_event(SimEvent::Kind::kDiscard, tick, from, to, m.stamp);
          }
          q.pop_front();
        }
        if (q.empty()) {
          channel_active[ch] = false;
          active_channels[a] = active_channels.back();
          active_channels.pop_back();
        } else {
          ++a;
        }
      }

      // 1.5 the dual value computed at the previous boundary takes effect at
      // the round's first tick; deliveries above still carried the old stamp
      if (pending_flip && tau == 0) {
        mu = std::move(mu_next);
        ++t;
        pending_flip = false;
        cycles.reset_round(seq);
        std::fill(fresh.begin(), fresh.end(), false);
        std::fill(last_upload_seq.begin(), last_upload_seq.end(), -1);
        refresh_round_target();
        log_event(SimEvent::Kind::kDualUpdate, tick, -1, -1, t);
      }

      // 2. gradient updates on this tick's update set
      for (int i : round.ticks[tau].updates) {
        p.blocks.block(copies[i], i) =
            primal_block_step(p, i, copies[i], mu, k, steps.gamma);
        ++seq;
        last_update_seq[i] = seq;
        cycles.on_update(i, seq);
        log_event(SimEvent::Kind::kUpdate, tick, i, -1, t);
      }

      // 3. sends carry the sender's current block
      for (const SendEvent& e : round.ticks[tau].sends) {
        const int ch = e.from * n_agents + e.to;
        auto& q = channels[ch];
        Message m;
        m.value = p.blocks.block(copies[e.from], e.from);
        m.sent = tick;
        m.deliver = tick + 1 + e.delay;
        if (!q.empty()) m.deliver = std::max(m.deliver, q.back().deliver);
        m.stamp = t;
        m.sender_update_seq = last_update_seq[e.from];
        q.push_back(std::move(m));
        if (!channel_active[ch]) {
          channel_active[ch] = true;
          active_channels.push_back(ch);
        }
        ++trace.sent_messages;
        log_event(SimEvent::Kind::kSend, tick, e.from, e.to, t);
      }
      for (int i : round.ticks[tau].uploads) {
        p.blocks.block(xc, i) = p.blocks.block(copies[i], i);
        fresh[i] = true;
        ++seq;
        last_upload_seq[i] = seq;
        log_event(SimEvent::Kind::kUpload, tick, i, -1, t);
      }

      // 4. cloud gate at the round's last tick
      if (tau == len - 1) {
        int n_fresh = 0;
        for (bool f : fresh) n_fresh += f ? 1 : 0;
        if (opts.gate == CloudGate::kAllFresh && n_fresh != n_agents) {
          throw std::logic_error(
              "run_async: cloud gate unsatisfied at a round boundary");
        }
        if (n_fresh == 0) {
          throw std::logic_error("run_async: no fresh block at the boundary");
        }

        std::int64_t earliest_kept = std::numeric_limits<std::int64_t>::max();
        for (int i = 0; i < n_agents; ++i) {
          if (last_upload_seq[i] >= 0) {
            earliest_kept = std::min(earliest_kept, last_upload_seq[i]);
          }
        }
        const int c_t = cycles.cycles_before(earliest_kept);

        TraceRow row;
        row.t = t;
        row.k_t = k_start;
        row.cycles = c_t;
        row.fresh = n_fresh;
        const VectorXd gxc = p.num_constraints > 0 ? p.g_value(xc) : VectorXd();
        if (p.num_constraints > 0) row.max_g = gxc.maxCoeff();
        if (opts.refs) {
          row.err_x_reg = (xc - opts.refs->x_reg).norm();
          if (opts.refs->x_unreg) {
            row.err_x_unreg = (xc - *opts.refs->x_unreg).norm();
          }
          if (want_mu_refs) {
            row.err_mu_reg = (mu - opts.refs->mu_reg).norm();
            if (opts.refs->mu_unreg) {
              row.err_mu_unreg = (mu - *opts.refs->mu_unreg).norm();
            }
            row.dual_bound_sq = dual_bound_state;
            row.primal_bound =
                primal_total_bound(c_t, row.err_mu_reg, rate_consts, k.alpha);
            dual_bound_state = rate_consts.qd * dual_bound_state +
                         dual_rate_error_term(c_t, rate_consts);
          }
        }
        if (opts.track_round_targets) {
          row.d_kt = d_kt;
          row.bmax_xc_target = block_max_norm(xc - xhat_t, p.blocks);
          row.l2_xc_target = (xc - xhat_t).norm();
          double worst = 0.0;
          for (int i = 0; i < n_agents; ++i) {
            const VectorXd diff = copies[i] - xhat_t;
            worst = std::max(worst, block_max_norm_subset(
                                        diff, p.blocks, essential_blocks[i]));
          }
          row.max_agent_bmax = worst;
        }

        bool stored = false;
        if (t % opts.stride == 0) {
          trace.rows.push_back(row);
          stored = true;
        }
        if (opts.refs && opts.stop_tol > 0.0 && row.err_x_reg < opts.stop_tol &&
            (!want_mu_refs || row.err_mu_reg < opts.stop_tol)) {
          trace.converged = true;
          trace.converged_round = t;
          stop = true;
        }
        if ((stop || trace.rounds_run + 1 >= opts.max_rounds) && !stored) {
          trace.rows.push_back(row);
        }

        if (p.num_constraints > 0) {
          mu_next = dual_step(mu, gxc, steps.rho, k.beta, ball);
        } else {
          mu_next = mu;
        }
        pending_flip = true;
        ++trace.rounds_run;
      }

      ++trace.ticks_run;
      if (opts.observer) opts.observer(tick, copies, mu, t);
    }
  }

  trace.final_xc = xc;
  trace.final_mu = pending_flip ? mu_next : mu;
  return trace;
}

RunTrace run_async(const ProblemSpec& p, const RegParams& k,
                   const StepSizes& steps, const BoundsPack& bounds,
                   const SimSchedule& schedule, const VectorXd& x0,
                   const VectorXd& mu0, const SimOptions& opts) {
  MaterializedSource src(schedule);
  SimOptions o = opts;
  o.max_rounds = std::min<std::int64_t>(
      o.max_rounds, static_cast<std::int64_t>(schedule.rounds.size()));
  return run_async(p, k, steps, bounds, src, x0, mu0, o);
}

RunTrace run_async_partial(const ProblemSpec& p, const RegParams& k,
                           const StepSizes& steps, const BoundsPack& bounds,
                           ScheduleSource& schedule, const VectorXd& x0,
                           const VectorXd& mu0, SimOptions opts) {
  opts.gate = CloudGate::kAnyFresh;
  return run_async(p, k, steps, bounds, schedule, x0, mu0, opts);
}

int count_cycles(const std::vector<SimEvent>& events,
                 const std::vector<std::vector<int>>& neighborhoods,
                 std::int64_t round) {
  const int n = static_cast<int>(neighborhoods.size());
  CycleTracker tracker;
  tracker.init(n, neighborhoods);
  tracker.reset_round(-1);

  // FIFO reconstruction of which send each delivery consumed.
  std::vector<std::deque<std::int64_t>> in_flight(n * n);
  std::vector<std::int64_t> last_update_seq(n, -1);
  std::vector<std::int64_t> last_upload_seq(n, -1);
  std::int64_t seq = 0;
  std::int64_t current_round = 0;

  auto result = [&]() {
    std::int64_t earliest_kept = std::numeric_limits<std::int64_t>::max();
    for (int i = 0; i < n; ++i) {
      if (last_upload_seq[i] >= 0) {
        earliest_kept = std::min(earliest_kept, last_upload_seq[i]);
      }
    }
    return tracker.cycles_before(earliest_kept);
  };

  for (const SimEvent& e : events) {
    switch (e.kind) {
      case SimEvent::Kind::kDualUpdate:
        if (current_round == round) return result();
        current_round = e.stamp;
        tracker.reset_round(seq);
        std::fill(last_upload_seq.begin(), last_upload_seq.end(), -1);
        break;
      case SimEvent::Kind::kUpdate:
        ++seq;
        last_update_seq[e.from] = seq;
        if (current_round == round) tracker.on_update(e.from, seq);
        break;
      case SimEvent::Kind::kSend:
        in_flight[e.from * n + e.to].push_back(last_update_seq[e.from]);
        break;
      case SimEvent::Kind::kDeliver: {
        auto& q = in_flight[e.from * n + e.to];
        const std::int64_t sender_seq = q.empty() ? -1 : q.front();
        if (!q.empty()) q.pop_front();
        ++seq;
        if (current_round == round) {
          tracker.on_delivery(e.from, e.to, sender_seq, seq);
        }
        break;
      }
      case SimEvent::Kind::kDiscard: {
        auto& q = in_flight[e.from * n + e.to];
        if (!q.empty()) q.pop_front();
        break;
      }
      case SimEvent::Kind::kUpload:
        ++seq;
        if (current_round == round) last_upload_seq[e.from] = seq;
        break;
    }
  }
  return result();
}

}  // namespace apd
