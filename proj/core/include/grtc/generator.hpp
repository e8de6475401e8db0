// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <vector>

#include "grtc/change_log.hpp"
#include "grtc/operators.hpp"
#include "grtc/policy.hpp"
#include "grtc/rotation_state.hpp"
#include "grtc/trace.hpp"

namespace grtc {

/// Times at which tasks are performed; strictly increasing, at least one.
class TaskSchedule {
 public:
  static TaskSchedule explicit_times(std::vector<double> times);
  static TaskSchedule periodic(double start, double interval, std::size_t count);

  const std::vector<double>& times() const noexcept { return times_; }

 private:
  explicit TaskSchedule(std::vector<double> times) : times_(std::move(times)) {}
  std::vector<double> times_;
};

struct StallInterval {
  double start = 0.0;                // task time at which the rotation froze
  std::optional<double> end;         // task time at which it resumed
  double duration = 0.0;
  std::size_t resume_state = 0;      // index into RunRecord::states, 0 if never resumed
  bool reseeded = false;             // resumed from a freshly dealt state

  friend bool operator==(const StallInterval&, const StallInterval&) = default;
};

struct RunRecord {
  nlohmann::ordered_json config;
  std::vector<RotationState> states;
  std::vector<ChangeLog> change_logs;  // change_logs[k] leads from states[k] to states[k + 1]
  std::vector<double> times;           // times[k]: task time served by states[k + 1]
  std::vector<StallInterval> stalls;
  std::size_t unconsumed_events = 0;

  /// True when states[k] -> states[k + 1] restarts the rotation after a stall
  /// and is therefore exempt from the follows relation.
  bool is_reseed(std::size_t k) const noexcept;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Events with t_prev < t <= t_i, in original order. `events` must be time-ordered.
std::vector<WorkerEvent> partition_events(std::span<const WorkerEvent> events, double t_prev, double t_i);

/// One Next step: applies the batch worker-at-a-time, repairs any group left
/// short of d, then advances the current group.
///
/// Throws Error{InconsistentEvent} and propagates StallError.
OperatorResult next_state(const RotationState& state, const OperatorPolicy& policy, const StrategySet& strategies,
                          Rng& rng, std::span<const WorkerEvent> batch);

/// Deals `workers` (in seq order) round-robin into max(2, n / d) groups named
/// g<first_ordinal>, g<first_ordinal + 1>, ...; the first is current.
/// Throws StallError when fewer than two workers are given.
RotationState build_initial_state(std::span<const WorkerId> workers, const OperatorPolicy& policy,
                                  std::uint64_t first_ordinal = 1);

/// Drives a full rotation over the schedule. Stalls freeze the rotation until
/// a later task time admits a valid state; they are recorded, not thrown.
RunRecord run_rotation(const RotationState& initial, const OperatorPolicy& policy, const StrategySet& strategies,
                       const TaskSchedule& schedule, std::span<const WorkerEvent> events, std::uint64_t seed);

}  // namespace grtc
