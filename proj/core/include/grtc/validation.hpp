// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace grtc {

enum class ViolationCode {
  NotPartition,
  EmptyGroup,
  NotSingleCycle,
  TooFewGroups,
  CurrentMissing,
  FollowsOverlap,
  FollowsCurrentGone,
  FollowsWrongSuccessor,
  ReplayMismatch,
  StepOrder,
  MalformedRecord,
  // Notices: reported, never a hard failure.
  BelowFloorDegraded,
  BelowFloor,
};

std::string_view to_string(ViolationCode code) noexcept;

constexpr bool is_notice(ViolationCode code) noexcept {
  return code == ViolationCode::BelowFloorDegraded || code == ViolationCode::BelowFloor;
}

struct Violation {
  ViolationCode code;
  std::string detail;
  long step = -1;  // -1 when not tied to a record step
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<Violation> notices;

  bool ok() const noexcept { return violations.empty(); }
  bool has(ViolationCode code) const noexcept;

  void add(ViolationCode code, std::string detail, long step = -1);
  void merge(const ValidationReport& other);
};

}  // namespace grtc
