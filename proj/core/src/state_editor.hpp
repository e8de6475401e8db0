// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>

#include "grtc/rotation_state.hpp"

namespace grtc {

// Mutable view used by the operators while building a successor state.
// Callers must leave the state valid before calling release().
class StateEditor {
 public:
  explicit StateEditor(RotationState state) : s_(std::move(state)) {}

  std::vector<Group>& ring() noexcept { return s_.ring_; }
  const std::vector<Group>& ring() const noexcept { return s_.ring_; }
  std::size_t current_index() const noexcept { return s_.current_; }
  const RotationState& view() const noexcept { return s_; }

  void set_current(std::size_t index) noexcept { s_.current_ = index; }
  void set_step(std::uint64_t step) noexcept { s_.step_ = step; }
  void set_next_ordinal(std::uint64_t ordinal) noexcept { s_.next_ordinal_ = ordinal; }

  GroupId allocate_group_id() {
    for (;;) {
      GroupId id = "g" + std::to_string(s_.next_ordinal_++);
      if (!s_.find_group(id)) return id;
    }
  }

  // Inserts a group at vector position `pos`, keeping the current group.
  void insert_group(std::size_t pos, Group g) {
    s_.ring_.insert(s_.ring_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(g));
    if (pos <= s_.current_) ++s_.current_;
  }

  // Erases the group at `pos`; must not be the current group.
  Group erase_group(std::size_t pos) {
    Group g = std::move(s_.ring_[pos]);
    s_.ring_.erase(s_.ring_.begin() + static_cast<std::ptrdiff_t>(pos));
    if (pos < s_.current_) --s_.current_;
    return g;
  }

  RotationState release() && { return std::move(s_); }

 private:
  RotationState s_;
};

}  // namespace grtc
