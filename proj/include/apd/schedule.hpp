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

#ifndef APD_SCHEDULE_HPP_
#define APD_SCHEDULE_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "apd/problem.hpp"

namespace apd {

using Tick = std::int64_t;

// Parameters of the randomized schedule generator.
struct ScheduleParams {
  double p_update = 0.05;  // per agent per tick
  double p_edge = 0.05;    // per unordered essential pair per tick
  int round_len_lo = 5;    // cloud round length, uniform integer range
  int round_len_hi = 100;
  int delay_lo = 0;  // per-directed-message delivery delay in ticks
  int delay_hi = 0;
  double p_upload = 1.0;  // per agent per round; < 1 only for the partial gate
  std::uint64_t seed = 0;

  void validate(int num_agents) const;
};

// One directed send scheduled at a tick.
struct SendEvent {
  int from = 0;
  int to = 0;
  int delay = 0;
};

// Everything that happens at one tick of one round.
struct TickPlan {
  std::vector<int> updates;     // agents with this tick in K^i
  std::vector<SendEvent> sends; // inter-agent transmissions, R^i_j
  std::vector<int> uploads;     // agents sending to the cloud, C^i
};

struct RoundSchedule {
  Tick start = 0;               // k_t
  std::vector<TickPlan> ticks;  // length = round length
};

// Deterministic per-round stream of schedule realizations. Draw order per
// round is fixed: round length; one upload tick per uploading agent; per tick
// (agent update flags, then pair exchange flags in lexicographic pair order,
// then one delay per direction for each active pair); then one forced update
// tick for every agent left without one (the finite-horizon stand-in for the
// requirement that no agent ever stops updating).
class ScheduleStream {
 public:
  ScheduleStream(const ProblemSpec& p, const ScheduleParams& params);

  RoundSchedule next_round();
  int rounds_emitted() const { return rounds_emitted_; }
  const std::vector<std::vector<int>>& neighborhoods() const {
    return neighbors_;
  }

 private:
  int num_agents_;
  ScheduleParams params_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::pair<int, int>> pairs_;  // essential unordered pairs, i < j
  std::mt19937_64 rng_;
  Tick next_start_ = 0;
  int rounds_emitted_ = 0;

  bool bernoulli(double p);
  int uniform_int(int lo, int hi);
};

// A fully materialized schedule (for tests and short runs).
struct SimSchedule {
  int num_agents = 0;
  ScheduleParams params;
  std::vector<RoundSchedule> rounds;

  Tick horizon() const {
    if (rounds.empty()) return 0;
    return rounds.back().start + static_cast<Tick>(rounds.back().ticks.size());
  }
};

// Materializes `num_rounds` rounds. Deterministic function of params.seed.
SimSchedule generate_schedule(const ProblemSpec& p, const ScheduleParams& params,
                              int num_rounds);

// Deterministic two-ticks-per-round schedule under which the asynchronous
// simulator reproduces the synchronous Jacobi iteration exactly: every round
// uploads each agent's state at the first tick (the round-start value),
// updates every agent at the second tick, and exchanges all essential pairs at
// the second tick with zero delay so all copies are fresh at the next round.
SimSchedule jacobi_equivalent_schedule(const ProblemSpec& p, int num_rounds);

// Checks the schedule invariants (update set nonempty per round, sends only
// along essential pairs, at least one upload per agent per round when
// p_upload == 1). Throws std::invalid_argument naming the violated field.
void validate_schedule(const ProblemSpec& p, const SimSchedule& s);

}  // namespace apd

#endif  // APD_SCHEDULE_HPP_
