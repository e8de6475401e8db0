// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "grtc/policy.hpp"
#include "grtc/rng.hpp"
#include "grtc/rotation_state.hpp"

namespace grtc {

/// Remembers which group performed the last task and who was in it, so that
/// restructuring inside one batch never places those workers in the group
/// that performs next.
struct FollowsGuard {
  GroupId current;
  std::unordered_set<std::string> performed;

  static FollowsGuard of(const RotationState& state);

  /// True when moving `moved` from `from` into `to` would put a worker who
  /// just performed into the successor of the guarded group.
  bool forbids(const RotationState& state, const GroupId& from, const WorkerId& moved,
               const GroupId& to) const;
};

/// Picks the group that receives an arriving worker. `rng` is only drawn
/// from by ChooseKind::Random.
GroupId choose_group(const RotationState& state, const OperatorPolicy& policy, ChooseKind kind, Rng& rng);

/// Halves a group: the ceil(n/2) members with the smallest seq stay, the rest
/// move. Both halves keep their relative input order. Throws Error{TooSmall}
/// for fewer than two members.
std::pair<std::vector<WorkerId>, std::vector<WorkerId>> partition_for_split(std::span<const WorkerId> members);

/// Member with the largest seq; the one a donor gives away.
const WorkerId& newest_member(const Group& group);

/// Alternating nearest-first ring scan from `deficient` (first direction per
/// `order`) over at most `horizon` hops. Returns the first group with at least
/// `min_size` members whose newest member may legally move to `deficient`.
std::optional<GroupId> find_donor(const RotationState& state, const GroupId& deficient, FindOrder order,
                                  std::size_t horizon, std::size_t min_size, const FollowsGuard& guard);

/// find_donor with min_size = d + 1 and the guard derived from `state`.
std::optional<GroupId> find_donor(const RotationState& state, const OperatorPolicy& policy,
                                  const GroupId& deficient, FindOrder order, std::size_t horizon);

}  // namespace grtc
