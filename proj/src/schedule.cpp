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

#include "apd/schedule.hpp"

#include <algorithm>
#include <stdexcept>

namespace apd {

void ScheduleParams::validate(int num_agents) const {
  if (num_agents <= 0) {
    throw std::invalid_argument("ScheduleParams: num_agents must be positive");
  }
  if (p_update < 0.0 || p_update > 1.0) {
    throw std::invalid_argument("ScheduleParams: p_update outside [0,1]");
  }
  if (p_edge < 0.0 || p_edge > 1.0) {
    throw std::invalid_argument("ScheduleParams: p_edge outside [0,1]");
  }
  if (p_upload <= 0.0 || p_upload > 1.0) {
    throw std::invalid_argument("ScheduleParams: p_upload outside (0,1]");
  }
  if (round_len_lo < 1 || round_len_hi < round_len_lo) {
    throw std::invalid_argument("ScheduleParams: bad round length range");
  }
  if (delay_lo < 0 || delay_hi < delay_lo) {
    throw std::invalid_argument("ScheduleParams: bad delay range");
  }
}

ScheduleStream::ScheduleStream(const ProblemSpec& p,
                               const ScheduleParams& params)
    : num_agents_(p.agents()), params_(params), rng_(params.seed) {
  params_.validate(num_agents_);
  neighbors_ = essential_neighborhoods(p);
  for (int i = 0; i < num_agents_; ++i) {
    for (int j : neighbors_[i]) {
      if (i < j) pairs_.emplace_back(i, j);
    }
  }
}

bool ScheduleStream::bernoulli(double p) {
  // 53-bit mantissa draw; avoids std::bernoulli_distribution so schedules are
  // identical across standard libraries.
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53 < p;
}

int ScheduleStream::uniform_int(int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t draw;
  do {
    draw = rng_();
  } while (draw >= limit);
  return lo + static_cast<int>(draw % span);
}

RoundSchedule ScheduleStream::next_round() {
  RoundSchedule round;
  round.start = next_start_;
  const int len = uniform_int(params_.round_len_lo, params_.round_len_hi);
  round.ticks.resize(len);

  // Cloud sends: one uniformly placed upload per agent per round (each agent
  // is skipped with probability 1 - p_upload, except agent 0 stand-in below).
  std::vector<int> upload_tick(num_agents_, -1);
  int uploaders = 0;
  for (int i = 0; i < num_agents_; ++i) {
    if (params_.p_upload >= 1.0 || bernoulli(params_.p_upload)) {
      upload_tick[i] = uniform_int(0, len - 1);
      ++uploaders;
    }
  }
  if (uploaders == 0) {
    // the cloud gate needs at least one fresh block per round
    const int forced = uniform_int(0, num_agents_ - 1);
    upload_tick[forced] = uniform_int(0, len - 1);
  }
  for (int i = 0; i < num_agents_; ++i) {
    if (upload_tick[i] >= 0) round.ticks[upload_tick[i]].uploads.push_back(i);
  }

  std::vector<bool> has_update(num_agents_, false);
  for (int tau = 0; tau < len; ++tau) {
    TickPlan& plan = round.ticks[tau];
    for (int i = 0; i < num_agents_; ++i) {
      if (bernoulli(params_.p_update)) {
        plan.updates.push_back(i);
        has_update[i] = true;
      }
    }
    for (const auto& [i, j] : pairs_) {
      if (bernoulli(params_.p_edge)) {
        int dij = 0, dji = 0;
        if (params_.delay_hi > 0) {
          dij = uniform_int(params_.delay_lo, params_.delay_hi);
          dji = uniform_int(params_.delay_lo, params_.delay_hi);
        } else {
          dij = dji = params_.delay_lo;
        }
        plan.sends.push_back(SendEvent{i, j, dij});
        plan.sends.push_back(SendEvent{j, i, dji});
      }
    }
  }
  // No agent may sit out a whole round (finite-horizon surrogate for the
  // requirement that every update set is infinite).
  for (int i = 0; i < num_agents_; ++i) {
    if (!has_update[i]) {
      round.ticks[uniform_int(0, len - 1)].updates.push_back(i);
    }
  }

  next_start_ += len;
  ++rounds_emitted_;
  return round;
}

SimSchedule generate_schedule(const ProblemSpec& p,
                              const ScheduleParams& params, int num_rounds) {
  ScheduleStream stream(p, params);
  SimSchedule s;
  s.num_agents = p.agents();
  s.params = params;
  s.rounds.reserve(num_rounds);
  for (int t = 0; t < num_rounds; ++t) s.rounds.push_back(stream.next_round());
  return s;
}

SimSchedule jacobi_equivalent_schedule(const ProblemSpec& p, int num_rounds) {
  const int n = p.agents();
  const auto neighbors = essential_neighborhoods(p);
  SimSchedule s;
  s.num_agents = n;
  s.params.p_update = 1.0;
  s.params.p_edge = 1.0;
  s.params.round_len_lo = s.params.round_len_hi = 2;
  s.rounds.reserve(num_rounds);
  for (int t = 0; t < num_rounds; ++t) {
    RoundSchedule round;
    round.start = 2 * static_cast<Tick>(t);
    round.ticks.resize(2);
    for (int i = 0; i < n; ++i) {
      round.ticks[0].uploads.push_back(i);  // round-start value
      round.ticks[1].updates.push_back(i);
      for (int j : neighbors[i]) {
        if (i < j) {
          round.ticks[1].sends.push_back(SendEvent{i, j, 0});
          round.ticks[1].sends.push_back(SendEvent{j, i, 0});
        }
      }
    }
    s.rounds.push_back(std::move(round));
  }
  return s;
}

void validate_schedule(const ProblemSpec& p, const SimSchedule& s) {
  const auto neighbors = essential_neighborhoods(p);
  const int n = p.agents();
  if (s.num_agents != n) {
    throw std::invalid_argument("SimSchedule: num_agents mismatch");
  }
  Tick expect_start = s.rounds.empty() ? 0 : s.rounds.front().start;
  for (std::size_t t = 0; t < s.rounds.size(); ++t) {
    const RoundSchedule& round = s.rounds[t];
    if (round.ticks.empty()) {
      throw std::invalid_argument("SimSchedule: empty round");
    }
    if (round.start != expect_start) {
      throw std::invalid_argument("SimSchedule: round starts not contiguous");
    }
    expect_start += static_cast<Tick>(round.ticks.size());
    std::vector<bool> has_update(n, false);
    std::vector<bool> has_upload(n, false);
    for (const TickPlan& plan : round.ticks) {
      for (int i : plan.updates) has_update[i] = true;
      for (int i : plan.uploads) has_upload[i] = true;
      for (const SendEvent& e : plan.sends) {
        const auto& nb = neighbors[e.to];
        if (std::find(nb.begin(), nb.end(), e.from) == nb.end()) {
          throw std::invalid_argument(
              "SimSchedule: send scheduled outside essential pairs");
        }
        if (e.delay < 0) {
          throw std::invalid_argument("SimSchedule: negative delay");
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      if (!has_update[i]) {
        throw std::invalid_argument(
            "SimSchedule: agent has no update tick in a round");
      }
      if (s.params.p_upload >= 1.0 && !has_upload[i]) {
        throw std::invalid_argument(
            "SimSchedule: agent has no cloud send in a round");
      }
    }
  }
}

}  // namespace apd
