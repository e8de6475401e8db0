// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#include "grtc/error.hpp"

#include "grtc/validation.hpp"

namespace grtc {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownGroup: return "UnknownGroup";
    case ErrorCode::UnknownWorker: return "UnknownWorker";
    case ErrorCode::DuplicateWorker: return "DuplicateWorker";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::BelowThreshold: return "BelowThreshold";
    case ErrorCode::TooFewGroups: return "TooFewGroups";
    case ErrorCode::DonorTooSmall: return "DonorTooSmall";
    case ErrorCode::ForbiddenMove: return "ForbiddenMove";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::InconsistentEvent: return "InconsistentEvent";
    case ErrorCode::InvalidPair: return "InvalidPair";
    case ErrorCode::CorruptRecord: return "CorruptRecord";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::OrderError: return "OrderError";
    case ErrorCode::ConsistencyError: return "ConsistencyError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

std::string_view to_string(ViolationCode code) noexcept {
  switch (code) {
    case ViolationCode::NotPartition: return "NotPartition";
    case ViolationCode::EmptyGroup: return "EmptyGroup";
    case ViolationCode::NotSingleCycle: return "NotSingleCycle";
    case ViolationCode::TooFewGroups: return "TooFewGroups";
    case ViolationCode::CurrentMissing: return "CurrentMissing";
    case ViolationCode::FollowsOverlap: return "FollowsOverlap";
    case ViolationCode::FollowsCurrentGone: return "FollowsCurrentGone";
    case ViolationCode::FollowsWrongSuccessor: return "FollowsWrongSuccessor";
    case ViolationCode::ReplayMismatch: return "ReplayMismatch";
    case ViolationCode::StepOrder: return "StepOrder";
    case ViolationCode::MalformedRecord: return "MalformedRecord";
    case ViolationCode::BelowFloorDegraded: return "BelowFloorDegraded";
    case ViolationCode::BelowFloor: return "BelowFloor";
  }
  return "Unknown";
}

bool ValidationReport::has(ViolationCode code) const noexcept {
  const auto& list = is_notice(code) ? notices : violations;
  for (const auto& v : list)
    if (v.code == code) return true;
  return false;
}

void ValidationReport::add(ViolationCode code, std::string detail, long step) {
  auto& list = is_notice(code) ? notices : violations;
  list.push_back({code, std::move(detail), step});
}

void ValidationReport::merge(const ValidationReport& other) {
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  notices.insert(notices.end(), other.notices.begin(), other.notices.end());
}

}  // namespace grtc
