// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#include "grtc/rotation_state.hpp"

#include <charconv>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "grtc/error.hpp"
#include "state_editor.hpp"

namespace grtc {
namespace {

std::uint64_t ordinal_after(std::span<const Group> groups) {
  std::uint64_t max_seen = 0;
  for (const auto& g : groups) {
    if (g.id.size() < 2 || g.id[0] != 'g') continue;
    std::uint64_t value = 0;
    const char* first = g.id.data() + 1;
    const char* last = g.id.data() + g.id.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc{} && ptr == last) max_seen = std::max(max_seen, value);
  }
  return max_seen + 1;
}

}  // namespace

std::size_t RotationState::worker_count() const noexcept {
  std::size_t n = 0;
  for (const auto& g : ring_) n += g.members.size();
  return n;
}

std::optional<std::size_t> RotationState::find_group(const GroupId& g) const noexcept {
  for (std::size_t i = 0; i < ring_.size(); ++i)
    if (ring_[i].id == g) return i;
  return std::nullopt;
}

std::optional<std::size_t> RotationState::find_worker(const std::string& worker) const noexcept {
  for (std::size_t i = 0; i < ring_.size(); ++i)
    for (const auto& w : ring_[i].members)
      if (w.id == worker) return i;
  return std::nullopt;
}

std::size_t RotationState::index_of(const GroupId& g) const {
  if (auto i = find_group(g)) return *i;
  throw Error(ErrorCode::UnknownGroup, g);
}

const GroupId& RotationState::successor(const GroupId& g) const {
  return ring_[(index_of(g) + 1) % ring_.size()].id;
}

const GroupId& RotationState::predecessor(const GroupId& g) const {
  return ring_[(index_of(g) + ring_.size() - 1) % ring_.size()].id;
}

std::size_t RotationState::counter_of_group(const GroupId& g) const {
  const std::size_t m = ring_.size();
  return (index_of(g) + m - current_) % m;
}

std::size_t RotationState::counter_of_worker(const std::string& worker) const {
  auto i = find_worker(worker);
  if (!i) throw Error(ErrorCode::UnknownWorker, worker);
  const std::size_t m = ring_.size();
  return (*i + m - current_) % m;
}

std::vector<WorkerId> RotationState::workers() const {
  std::vector<WorkerId> out;
  out.reserve(worker_count());
  for (const auto& g : ring_) out.insert(out.end(), g.members.begin(), g.members.end());
  return out;
}

ValidationReport validate_groups(std::span<const Group> groups, const GroupId& current) {
  ValidationReport report;
  if (groups.size() < 2)
    report.add(ViolationCode::TooFewGroups, "ring has " + std::to_string(groups.size()) + " group(s)");

  std::unordered_set<std::string> group_ids;
  std::unordered_map<std::string, std::string> owner;
  bool has_current = false;
  for (const auto& g : groups) {
    if (!group_ids.insert(g.id).second)
      report.add(ViolationCode::NotSingleCycle, "group " + g.id + " appears more than once in the ring");
    if (g.id == current) has_current = true;
    if (g.members.empty()) report.add(ViolationCode::EmptyGroup, "group " + g.id + " has no workers");
    for (const auto& w : g.members) {
      auto [it, inserted] = owner.emplace(w.id, g.id);
      if (!inserted)
        report.add(ViolationCode::NotPartition,
                   "worker " + w.id + " appears in " + it->second + " and " + g.id);
    }
  }
  if (!has_current) report.add(ViolationCode::CurrentMissing, "current group " + current + " not in ring");
  return report;
}

BuildResult build_state(std::vector<Group> groups, const GroupId& current, std::uint64_t step) {
  ValidationReport report = validate_groups(groups, current);
  if (!report.ok()) return report;

  RotationState s;
  s.next_ordinal_ = ordinal_after(groups);
  s.ring_ = std::move(groups);
  s.current_ = *s.find_group(current);
  s.step_ = step;
  return s;
}

RotationState build_state_or_throw(std::vector<Group> groups, const GroupId& current,
                                   std::uint64_t step) {
  auto result = build_state(std::move(groups), current, step);
  if (auto* report = std::get_if<ValidationReport>(&result))
    throw Error(ErrorCode::InvalidState, describe(*report));
  return std::get<RotationState>(std::move(result));
}

BuildResult build_state_from_names(
    const std::vector<std::pair<GroupId, std::vector<std::string>>>& groups, const GroupId& current,
    std::uint64_t step) {
  std::unordered_map<std::string, std::uint64_t> seq_of;
  std::vector<Group> ring;
  ring.reserve(groups.size());
  for (const auto& [id, names] : groups) {
    Group g{id, {}};
    for (const auto& name : names) {
      auto [it, _] = seq_of.emplace(name, seq_of.size());
      g.members.push_back({name, it->second});
    }
    ring.push_back(std::move(g));
  }
  return build_state(std::move(ring), current, step);
}

ValidationReport validate_pair(const RotationState& prev, const RotationState& next) {
  ValidationReport report;
  const Group& old_current = prev.current_group();
  const Group& new_current = next.current_group();

  std::unordered_set<std::string> performed;
  for (const auto& w : old_current.members) performed.insert(w.id);
  for (const auto& w : new_current.members)
    if (performed.contains(w.id))
      report.add(ViolationCode::FollowsOverlap,
                 "worker " + w.id + " performed in " + old_current.id + " and is in new current " +
                     new_current.id);

  if (!next.find_group(old_current.id)) {
    report.add(ViolationCode::FollowsCurrentGone, "previous current group " + old_current.id + " is gone");
  } else if (next.successor(old_current.id) != new_current.id) {
    report.add(ViolationCode::FollowsWrongSuccessor,
               "new current " + new_current.id + " is not the successor of " + old_current.id);
  }
  return report;
}

ValidationReport check_floor(const RotationState& state, std::size_t d) {
  ValidationReport report;
  const bool degraded = state.worker_count() < 2 * d;
  for (const auto& g : state.ring()) {
    if (g.members.size() >= d) continue;
    report.add(degraded ? ViolationCode::BelowFloorDegraded : ViolationCode::BelowFloor,
               "group " + g.id + " has " + std::to_string(g.members.size()) + " < d=" + std::to_string(d),
               static_cast<long>(state.step()));
  }
  return report;
}

RotationState advance_current(const RotationState& state) {
  StateEditor ed(state);
  ed.set_current((state.current_index() + 1) % state.group_count());
  ed.set_step(state.step() + 1);
  return std::move(ed).release();
}

RotationState with_step(const RotationState& state, std::uint64_t step) {
  StateEditor ed(state);
  ed.set_step(step);
  return std::move(ed).release();
}

std::string describe(const ValidationReport& report) {
  std::ostringstream os;
  bool first = true;
  for (const auto* list : {&report.violations, &report.notices}) {
    for (const auto& v : *list) {
      if (!first) os << "; ";
      first = false;
      if (v.step >= 0) os << "step " << v.step << ": ";
      os << to_string(v.code) << " (" << v.detail << ")";
    }
  }
  return os.str();
}

}  // namespace grtc
