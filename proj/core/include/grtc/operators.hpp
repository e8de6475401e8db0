// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "grtc/change_log.hpp"
#include "grtc/policy.hpp"
#include "grtc/rng.hpp"
#include "grtc/rotation_state.hpp"
#include "grtc/strategies.hpp"

namespace grtc {

struct OperatorResult {
  RotationState state;
  ChangeLog log;
};

/// Worker-at-a-time arrival. A group below d (if any) receives the worker,
/// otherwise the choose strategy decides. The receiving group is split once
/// if it grows past max(d).
///
/// Throws Error{DuplicateWorker}.
OperatorResult insert_worker(const RotationState& state, const OperatorPolicy& policy,
                             const StrategySet& strategies, Rng& rng, const WorkerId& worker,
                             const FollowsGuard& guard);
OperatorResult insert_worker(const RotationState& state, const OperatorPolicy& policy,
                             const StrategySet& strategies, Rng& rng, const WorkerId& worker);

/// Worker-at-a-time departure followed by deficit repair of the group the
/// worker left: donation from a nearby group with spare workers, else a join,
/// else degraded mode.
///
/// Throws Error{UnknownWorker}; StallError when fewer than two workers would
/// remain or the group is left empty with no legal refill.
OperatorResult remove_worker(const RotationState& state, const OperatorPolicy& policy,
                             const StrategySet& strategies, const std::string& worker,
                             const FollowsGuard& guard);
OperatorResult remove_worker(const RotationState& state, const OperatorPolicy& policy,
                             const StrategySet& strategies, const std::string& worker);

/// Splits `g` in half by seq. The new group goes right after `g`, or right
/// before the current group when `g` is current. Throws Error{BelowThreshold}
/// unless |g| > max(d).
OperatorResult split_group(const RotationState& state, const OperatorPolicy& policy, const GroupId& g);

struct JoinPlan {
  GroupId survivor;
  GroupId absorbed;
};

/// Survivor rules: a deficient current group absorbs its predecessor; the
/// current group absorbs a deficient predecessor; otherwise the deficient
/// group absorbs its successor. The current group is never absorbed.
JoinPlan plan_join(const RotationState& state, const GroupId& deficient);

/// Throws Error{TooFewGroups} when the ring has only two groups.
OperatorResult join_groups(const RotationState& state, const OperatorPolicy& policy, const GroupId& deficient);

/// Moves the newest member of `from` into `to`.
/// Throws Error{DonorTooSmall} when |from| < min_donor_size (default d + 1)
/// and Error{ForbiddenMove} when the guard rejects the move.
OperatorResult donate_worker(const RotationState& state, const OperatorPolicy& policy, const GroupId& from,
                             const GroupId& to, const FollowsGuard& guard, std::size_t min_donor_size = 0);
OperatorResult donate_worker(const RotationState& state, const OperatorPolicy& policy, const GroupId& from,
                             const GroupId& to);

/// Brings `g` back to d members if the rules allow it. Logs DegradedEntered
/// when the group stays short and `log_degraded` is set.
OperatorResult repair_deficit(const RotationState& state, const OperatorPolicy& policy,
                              const StrategySet& strategies, const GroupId& g, const FollowsGuard& guard,
                              bool log_degraded = true);

}  // namespace grtc
