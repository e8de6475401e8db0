// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <variant>
#include <vector>

#include "grtc/rotation_state.hpp"

namespace grtc {

namespace change {

struct Inserted {
  WorkerId worker;
  GroupId group;
  friend bool operator==(const Inserted&, const Inserted&) = default;
};

struct Removed {
  WorkerId worker;
  GroupId group;
  friend bool operator==(const Removed&, const Removed&) = default;
};

/// `moved` left `group` for the fresh group `new_group`. The fresh group sits
/// right after `group`, or right before the current group when `group` is current.
struct Split {
  GroupId group;
  GroupId new_group;
  std::vector<WorkerId> moved;
  friend bool operator==(const Split&, const Split&) = default;
};

/// `absorbed` was retired; its members were appended to `survivor`.
struct Joined {
  GroupId survivor;
  GroupId absorbed;
  std::vector<WorkerId> moved;
  friend bool operator==(const Joined&, const Joined&) = default;
};

struct Donated {
  WorkerId worker;
  GroupId from;
  GroupId to;
  friend bool operator==(const Donated&, const Donated&) = default;
};

struct DegradedEntered {
  GroupId group;
  friend bool operator==(const DegradedEntered&, const DegradedEntered&) = default;
};

struct Stalled {
  friend bool operator==(const Stalled&, const Stalled&) = default;
};

}  // namespace change

using ChangeEntry = std::variant<change::Inserted, change::Removed, change::Split, change::Joined,
                                 change::Donated, change::DegradedEntered, change::Stalled>;

struct ChangeLog {
  std::vector<ChangeEntry> entries;

  bool empty() const noexcept { return entries.empty(); }
  void append(const ChangeLog& other) {
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
  }

  std::size_t count_splits() const noexcept;
  std::size_t count_joins() const noexcept;
  std::size_t count_donations() const noexcept;
  bool has_restructuring() const noexcept { return count_splits() + count_joins() + count_donations() > 0; }

  friend bool operator==(const ChangeLog&, const ChangeLog&) = default;
};

/// Replays `log` against `pre` (no advance). Throws Error{CorruptRecord} when
/// an entry does not apply.
RotationState apply_change_log(const RotationState& pre, const ChangeLog& log);

}  // namespace grtc
