// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "grtc/validation.hpp"

namespace grtc {

/// A worker: an opaque token plus its global arrival sequence number.
/// The sequence number orders split and donation decisions.
struct WorkerId {
  std::string id;
  std::uint64_t seq = 0;

  friend bool operator==(const WorkerId&, const WorkerId&) = default;
};

using GroupId = std::string;

struct Group {
  GroupId id;
  std::vector<WorkerId> members;  // insertion order within the group

  friend bool operator==(const Group&, const Group&) = default;
};

class RotationState;
using BuildResult = std::variant<RotationState, ValidationReport>;

/// Snapshot of a group rotation: a ring of non-empty worker groups with one
/// current group. Ring position k's successor is position k+1 (mod m).
///
/// Instances are immutable once built; every transition returns a new value.
/// Only `build_state` and the operator internals can construct one, so any
/// RotationState in hand satisfies the partition, non-empty, single-cycle,
/// m >= 2 and current-in-ring conditions.
class RotationState {
 public:
  std::span<const Group> ring() const noexcept { return ring_; }
  std::size_t group_count() const noexcept { return ring_.size(); }
  std::size_t worker_count() const noexcept;

  const GroupId& current() const noexcept { return ring_[current_].id; }
  std::size_t current_index() const noexcept { return current_; }
  const Group& current_group() const noexcept { return ring_[current_]; }
  std::uint64_t step() const noexcept { return step_; }

  /// Ordinal used for the next freshly allocated group id ("g<ordinal>").
  std::uint64_t next_group_ordinal() const noexcept { return next_ordinal_; }

  std::optional<std::size_t> find_group(const GroupId& g) const noexcept;
  std::optional<std::size_t> find_worker(const std::string& worker) const noexcept;

  /// Throws Error{UnknownGroup}.
  std::size_t index_of(const GroupId& g) const;
  const Group& group(const GroupId& g) const { return ring_[index_of(g)]; }

  const GroupId& successor(const GroupId& g) const;
  const GroupId& predecessor(const GroupId& g) const;

  /// Ring distance from the current group to `g`; 0 for the current group.
  std::size_t counter_of_group(const GroupId& g) const;
  /// Counter of the group holding `worker`. Throws Error{UnknownWorker}.
  std::size_t counter_of_worker(const std::string& worker) const;

  /// All workers in ring order, then member order.
  std::vector<WorkerId> workers() const;

  friend bool operator==(const RotationState&, const RotationState&) = default;

 private:
  RotationState() = default;

  friend BuildResult build_state(std::vector<Group>, const GroupId&, std::uint64_t);
  friend class StateEditor;

  std::vector<Group> ring_;
  std::size_t current_ = 0;
  std::uint64_t step_ = 0;
  std::uint64_t next_ordinal_ = 1;
};

/// Validates and builds a state. Ring order equals the given list order.
/// On failure returns the complete report (every violation found).
BuildResult build_state(std::vector<Group> groups, const GroupId& current, std::uint64_t step = 0);

/// Like build_state but throws Error{InvalidState} carrying the report text.
RotationState build_state_or_throw(std::vector<Group> groups, const GroupId& current,
                                   std::uint64_t step = 0);

/// Convenience builder for fixtures: workers get seq numbers in order of
/// first appearance across the listing.
BuildResult build_state_from_names(
    const std::vector<std::pair<GroupId, std::vector<std::string>>>& groups, const GroupId& current,
    std::uint64_t step = 0);

/// Checks the state conditions on raw ring data (without constructing).
ValidationReport validate_groups(std::span<const Group> groups, const GroupId& current);

/// Follows relation: empty report iff `next` may directly follow `prev`.
ValidationReport validate_pair(const RotationState& prev, const RotationState& next);

/// Reports groups under the d floor as notices: BelowFloorDegraded when the
/// live worker count is below 2d, BelowFloor otherwise.
ValidationReport check_floor(const RotationState& state, std::size_t d);

/// Same state with the successor of the current group as current and the
/// step index incremented.
RotationState advance_current(const RotationState& state);

/// Same state with an explicit step index.
RotationState with_step(const RotationState& state, std::uint64_t step);

std::string describe(const ValidationReport& report);

}  // namespace grtc
