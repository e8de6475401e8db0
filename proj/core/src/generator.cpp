// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#include "grtc/generator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "grtc/error.hpp"
#include "state_editor.hpp"

namespace grtc {

TaskSchedule TaskSchedule::explicit_times(std::vector<double> times) {
  if (times.empty()) throw Error(ErrorCode::InvalidConfig, "schedule needs at least one task time");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw Error(ErrorCode::InvalidConfig, "task times must be finite");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw Error(ErrorCode::InvalidConfig, "task times must be strictly increasing");
  }
  return TaskSchedule(std::move(times));
}

TaskSchedule TaskSchedule::periodic(double start, double interval, std::size_t count) {
  if (count < 1) throw Error(ErrorCode::InvalidConfig, "schedule count must be >= 1");
  if (!(interval > 0.0) || !std::isfinite(interval))
    throw Error(ErrorCode::InvalidConfig, "schedule interval must be > 0");
  std::vector<double> times(count);
  for (std::size_t i = 0; i < count; ++i) times[i] = start + interval * static_cast<double>(i);
  return explicit_times(std::move(times));
}

bool RunRecord::is_reseed(std::size_t k) const noexcept {
  return std::any_of(stalls.begin(), stalls.end(),
                     [&](const StallInterval& s) { return s.reseeded && s.resume_state == k + 1; });
}

std::vector<WorkerEvent> partition_events(std::span<const WorkerEvent> events, double t_prev, double t_i) {
  auto by_time = [](double t, const WorkerEvent& e) { return t < e.t; };
  auto first = std::upper_bound(events.begin(), events.end(), t_prev, by_time);
  auto last = std::upper_bound(first, events.end(), t_i, by_time);
  return {first, last};
}

OperatorResult next_state(const RotationState& state, const OperatorPolicy& policy, const StrategySet& strategies,
                          Rng& rng, std::span<const WorkerEvent> batch) {
  const FollowsGuard guard = FollowsGuard::of(state);
  OperatorResult acc{state, {}};

  for (const auto& e : batch) {
    const bool present = acc.state.find_worker(e.worker.id).has_value();
    OperatorResult step = [&] {
      if (e.op == EventOp::Arrive) {
        if (present) throw Error(ErrorCode::InconsistentEvent, "arrival of present worker " + e.worker.id);
        return insert_worker(acc.state, policy, strategies, rng, e.worker, guard);
      }
      if (!present) throw Error(ErrorCode::InconsistentEvent, "departure of absent worker " + e.worker.id);
      return remove_worker(acc.state, policy, strategies, e.worker.id, guard);
    }();
    acc.state = std::move(step.state);
    acc.log.append(step.log);
  }

  // Groups can still be short of d: a departure may have hit the next group
  // while the only spare workers just performed. Retry now, in counter order.
  std::vector<GroupId> short_groups;
  {
    const auto ring = acc.state.ring();
    const std::size_t m = ring.size();
    for (std::size_t k = 0; k < m; ++k) {
      const Group& g = ring[(acc.state.current_index() + k) % m];
      if (g.members.size() < policy.d) short_groups.push_back(g.id);
    }
  }
  for (const auto& g : short_groups) {
    if (!acc.state.find_group(g) || acc.state.group(g).members.size() >= policy.d) continue;
    OperatorResult step = repair_deficit(acc.state, policy, strategies, g, guard, false);
    acc.state = std::move(step.state);
    acc.log.append(step.log);
  }

  acc.state = advance_current(acc.state);
  if (auto report = validate_pair(state, acc.state); !report.ok())
    throw std::logic_error("next_state broke the follows relation: " + describe(report));
  return acc;
}

RotationState build_initial_state(std::span<const WorkerId> workers, const OperatorPolicy& policy,
                                  std::uint64_t first_ordinal) {
  const std::size_t n = workers.size();
  if (n < 2) throw StallError("cannot form two groups from " + std::to_string(n) + " worker(s)");
  const std::size_t m = std::max<std::size_t>(2, n / policy.d);
  std::vector<Group> ring(m);
  for (std::size_t k = 0; k < m; ++k) ring[k].id = "g" + std::to_string(first_ordinal + k);
  for (std::size_t i = 0; i < n; ++i) ring[i % m].members.push_back(workers[i]);
  const GroupId current = ring.front().id;
  return build_state_or_throw(std::move(ring), current);
}

namespace {

std::vector<WorkerId> live_roster(const RotationState& frozen, std::span<const WorkerEvent> pending) {
  std::vector<WorkerId> roster = frozen.workers();
  for (const auto& e : pending) {
    if (e.op == EventOp::Arrive) {
      roster.push_back(e.worker);
    } else {
      std::erase_if(roster, [&](const WorkerId& w) { return w.id == e.worker.id; });
    }
  }
  std::sort(roster.begin(), roster.end(), [](const WorkerId& a, const WorkerId& b) { return a.seq < b.seq; });
  return roster;
}

ChangeLog reseed_log(std::span<const WorkerEvent> pending) {
  ChangeLog log;
  log.entries.push_back(change::Stalled{});
  for (const auto& e : pending) {
    if (e.op == EventOp::Arrive)
      log.entries.push_back(change::Inserted{e.worker, {}});
    else
      log.entries.push_back(change::Removed{e.worker, {}});
  }
  return log;
}

}  // namespace

RunRecord run_rotation(const RotationState& initial, const OperatorPolicy& policy, const StrategySet& strategies,
                       const TaskSchedule& schedule, std::span<const WorkerEvent> events, std::uint64_t seed) {
  policy.validate();
  Rng rng(seed);
  RunRecord record;
  record.states.push_back(initial);

  struct Frozen {
    RotationState state;
    std::vector<WorkerEvent> pending;
    double start;
  };
  std::optional<Frozen> frozen;

  const auto& times = schedule.times();
  double t_prev = -INFINITY;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    std::vector<WorkerEvent> window = partition_events(events, t_prev, t);
    t_prev = t;
    const std::uint64_t step = i + 1;

    if (!frozen) {
      try {
        OperatorResult r = next_state(record.states.back(), policy, strategies, rng, window);
        record.states.push_back(with_step(r.state, step));
        record.change_logs.push_back(std::move(r.log));
        record.times.push_back(t);
      } catch (const StallError&) {
        frozen = Frozen{record.states.back(), std::move(window), t};
      }
      continue;
    }

    frozen->pending.insert(frozen->pending.end(), window.begin(), window.end());
    StallInterval stall{frozen->start, t, t - frozen->start, 0, false};
    try {
      OperatorResult r = next_state(frozen->state, policy, strategies, rng, frozen->pending);
      record.states.push_back(with_step(r.state, step));
      record.change_logs.push_back(std::move(r.log));
    } catch (const StallError&) {
      std::vector<WorkerId> roster = live_roster(frozen->state, frozen->pending);
      if (roster.size() < 2) continue;
      RotationState fresh = build_initial_state(roster, policy, frozen->state.next_group_ordinal());
      record.states.push_back(with_step(fresh, step));
      record.change_logs.push_back(reseed_log(frozen->pending));
      stall.reseeded = true;
    }
    record.times.push_back(t);
    stall.resume_state = record.states.size() - 1;
    record.stalls.push_back(stall);
    frozen.reset();
  }

  if (frozen) record.stalls.push_back({frozen->start, std::nullopt, times.back() - frozen->start, 0, false});
  record.unconsumed_events = static_cast<std::size_t>(
      std::count_if(events.begin(), events.end(), [&](const WorkerEvent& e) { return e.t > times.back(); }));
  return record;
}

}  // namespace grtc
