// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#include "grtc/change_log.hpp"

#include <algorithm>
#include <charconv>
#include <optional>

#include "grtc/error.hpp"
#include "state_editor.hpp"

namespace grtc {
namespace {

template <class T>
std::size_t count_of(const std::vector<ChangeEntry>& entries) {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const ChangeEntry& e) { return std::holds_alternative<T>(e); }));
}

std::optional<std::uint64_t> id_ordinal(const GroupId& id) {
  if (id.size() < 2 || id[0] != 'g') return std::nullopt;
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), value);
  if (ec != std::errc{} || ptr != id.data() + id.size()) return std::nullopt;
  return value;
}

[[noreturn]] void corrupt(const std::string& what) { throw Error(ErrorCode::CorruptRecord, what); }

std::size_t group_index(const StateEditor& ed, const GroupId& g) {
  auto i = ed.view().find_group(g);
  if (!i) corrupt("change log names unknown group " + g);
  return *i;
}

WorkerId take_member(std::vector<WorkerId>& members, const WorkerId& w, const GroupId& g) {
  auto it = std::find(members.begin(), members.end(), w);
  if (it == members.end()) corrupt("worker " + w.id + " not in group " + g);
  WorkerId out = *it;
  members.erase(it);
  return out;
}

struct Replayer {
  StateEditor& ed;

  void operator()(const change::Inserted& e) {
    if (ed.view().find_worker(e.worker.id)) corrupt("worker " + e.worker.id + " inserted twice");
    ed.ring()[group_index(ed, e.group)].members.push_back(e.worker);
  }
  void operator()(const change::Removed& e) {
    take_member(ed.ring()[group_index(ed, e.group)].members, e.worker, e.group);
  }
  void operator()(const change::Split& e) {
    const std::size_t index = group_index(ed, e.group);
    for (const auto& w : e.moved) take_member(ed.ring()[index].members, w, e.group);
    const std::size_t cur = ed.current_index();
    const std::size_t pos = index == cur ? (cur == 0 ? ed.ring().size() : cur) : index + 1;
    ed.insert_group(pos, Group{e.new_group, e.moved});
  }
  void operator()(const change::Joined& e) {
    const std::size_t s = group_index(ed, e.survivor);
    const std::size_t a = group_index(ed, e.absorbed);
    if (a == ed.current_index()) corrupt("join absorbs the current group");
    if (ed.ring()[a].members != e.moved) corrupt("join moved-list does not match " + e.absorbed);
    auto& dst = ed.ring()[s].members;
    dst.insert(dst.end(), e.moved.begin(), e.moved.end());
    ed.erase_group(a);
  }
  void operator()(const change::Donated& e) {
    WorkerId w = take_member(ed.ring()[group_index(ed, e.from)].members, e.worker, e.from);
    ed.ring()[group_index(ed, e.to)].members.push_back(std::move(w));
  }
  void operator()(const change::DegradedEntered&) {}
  void operator()(const change::Stalled&) {}
};

}  // namespace

std::size_t ChangeLog::count_splits() const noexcept { return count_of<change::Split>(entries); }
std::size_t ChangeLog::count_joins() const noexcept { return count_of<change::Joined>(entries); }
std::size_t ChangeLog::count_donations() const noexcept { return count_of<change::Donated>(entries); }

RotationState apply_change_log(const RotationState& pre, const ChangeLog& log) {
  StateEditor ed(pre);
  Replayer replay{ed};
  std::uint64_t ordinal = pre.next_group_ordinal();
  for (const auto& entry : log.entries) {
    std::visit(replay, entry);
    if (const auto* split = std::get_if<change::Split>(&entry)) {
      if (auto k = id_ordinal(split->new_group); k && *k >= ordinal) ordinal = *k + 1;
    }
  }
  ed.set_next_ordinal(ordinal);
  return std::move(ed).release();
}

}  // namespace grtc
