// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#include "grtc/operators.hpp"

#include <algorithm>

#include "grtc/error.hpp"
#include "state_editor.hpp"

namespace grtc {
namespace {

void split_in_place(StateEditor& ed, const OperatorPolicy& policy, std::size_t index, ChangeLog& log) {
  auto& ring = ed.ring();
  if (ring[index].members.size() <= policy.max_size())
    throw Error(ErrorCode::BelowThreshold, "group " + ring[index].id + " has " +
                                               std::to_string(ring[index].members.size()) +
                                               " <= max(d)=" + std::to_string(policy.max_size()));
  auto [stay, move] = partition_for_split(ring[index].members);
  const GroupId original = ring[index].id;
  const GroupId fresh = ed.allocate_group_id();
  ring[index].members = std::move(stay);
  log.entries.push_back(change::Split{original, fresh, move});

  const std::size_t cur = ed.current_index();
  std::size_t pos;
  if (index == cur)
    pos = cur == 0 ? ring.size() : cur;  // immediately before the current group
  else
    pos = index + 1;
  ed.insert_group(pos, Group{fresh, std::move(move)});
}

void join_in_place(StateEditor& ed, const JoinPlan& plan, ChangeLog& log) {
  const auto& view = ed.view();
  const std::size_t s = view.index_of(plan.survivor);
  const std::size_t a = view.index_of(plan.absorbed);
  auto& ring = ed.ring();
  std::vector<WorkerId> moved = ring[a].members;
  ring[s].members.insert(ring[s].members.end(), moved.begin(), moved.end());
  log.entries.push_back(change::Joined{plan.survivor, plan.absorbed, std::move(moved)});
  ed.erase_group(a);
}

void donate_in_place(StateEditor& ed, const GroupId& from, const GroupId& to, ChangeLog& log) {
  auto& ring = ed.ring();
  auto& donor = ring[ed.view().index_of(from)].members;
  auto it = std::max_element(donor.begin(), donor.end(),
                             [](const WorkerId& a, const WorkerId& b) { return a.seq < b.seq; });
  WorkerId w = *it;
  donor.erase(it);
  ring[ed.view().index_of(to)].members.push_back(w);
  log.entries.push_back(change::Donated{std::move(w), from, to});
}

// A join is legal when the group that will follow the guarded group holds
// none of the workers who just performed.
bool join_allowed(const RotationState& state, const JoinPlan& plan, const FollowsGuard& guard) {
  const auto ring = state.ring();
  const std::size_t m = ring.size();
  const std::size_t a = state.index_of(plan.absorbed);
  std::size_t next = (state.index_of(guard.current) + 1) % m;
  if (next == a) next = (next + 1) % m;
  const bool next_is_survivor = ring[next].id == plan.survivor;
  for (const auto* members : {&ring[next].members, next_is_survivor ? &ring[a].members : nullptr}) {
    if (!members) continue;
    for (const auto& w : *members)
      if (guard.performed.contains(w.id)) return false;
  }
  return true;
}

void repair_in_place(StateEditor& ed, const OperatorPolicy& policy, const StrategySet& strategies, GroupId g,
                     const FollowsGuard& guard, bool log_degraded, ChangeLog& log) {
  const std::size_t d = policy.d;
  for (;;) {
    const RotationState& s = ed.view();
    const std::size_t size = s.group(g).members.size();
    if (size >= d) return;

    if (auto donor = find_donor(s, g, strategies.find_order, policy.find_horizon, d + 1, guard)) {
      donate_in_place(ed, *donor, g, log);
      continue;
    }
    if (s.group_count() >= 3) {
      JoinPlan plan = plan_join(s, g);
      if (join_allowed(s, plan, guard)) {
        join_in_place(ed, plan, log);
        g = plan.survivor;
        continue;
      }
    }
    if (policy.find_horizon != OperatorPolicy::kUnlimited) {
      if (auto donor = find_donor(s, g, strategies.find_order, OperatorPolicy::kUnlimited, d + 1, guard)) {
        donate_in_place(ed, *donor, g, log);
        continue;
      }
    }
    if (size == 0) {
      // An empty group breaks the state outright; any group with a spare worker may refill it.
      if (auto donor = find_donor(s, g, strategies.find_order, OperatorPolicy::kUnlimited, 2, guard)) {
        donate_in_place(ed, *donor, g, log);
        continue;
      }
      throw StallError("group " + g + " emptied and cannot be refilled without breaking the rotation");
    }
    if (log_degraded) log.entries.push_back(change::DegradedEntered{g});
    return;
  }
}

}  // namespace

OperatorResult insert_worker(const RotationState& state, const OperatorPolicy& policy,
                             const StrategySet& strategies, Rng& rng, const WorkerId& worker,
                             const FollowsGuard& guard) {
  (void)guard;  // fresh workers never performed, and splits never feed the successor
  if (state.find_worker(worker.id)) throw Error(ErrorCode::DuplicateWorker, worker.id);

  GroupId target;
  {
    // Groups short of d are refilled before any strategy gets a say.
    const auto ring = state.ring();
    const std::size_t m = ring.size();
    std::optional<std::size_t> best;
    auto counter = [&](std::size_t i) { return (i + m - state.current_index()) % m; };
    for (std::size_t i = 0; i < m; ++i) {
      if (ring[i].members.size() >= policy.d) continue;
      if (!best || ring[i].members.size() < ring[*best].members.size() ||
          (ring[i].members.size() == ring[*best].members.size() && counter(i) > counter(*best)))
        best = i;
    }
    target = best ? ring[*best].id : choose_group(state, policy, strategies.choose, rng);
  }

  ChangeLog log;
  StateEditor ed(state);
  const std::size_t index = state.index_of(target);
  ed.ring()[index].members.push_back(worker);
  log.entries.push_back(change::Inserted{worker, target});
  if (ed.ring()[index].members.size() > policy.max_size()) split_in_place(ed, policy, index, log);
  return {std::move(ed).release(), std::move(log)};
}

OperatorResult insert_worker(const RotationState& state, const OperatorPolicy& policy,
                             const StrategySet& strategies, Rng& rng, const WorkerId& worker) {
  return insert_worker(state, policy, strategies, rng, worker, FollowsGuard::of(state));
}

OperatorResult remove_worker(const RotationState& state, const OperatorPolicy& policy,
                             const StrategySet& strategies, const std::string& worker,
                             const FollowsGuard& guard) {
  const auto index = state.find_worker(worker);
  if (!index) throw Error(ErrorCode::UnknownWorker, worker);
  if (state.worker_count() < 3)
    throw StallError("removing " + worker + " leaves fewer than two workers");

  ChangeLog log;
  StateEditor ed(state);
  auto& members = ed.ring()[*index].members;
  auto it = std::find_if(members.begin(), members.end(), [&](const WorkerId& w) { return w.id == worker; });
  const GroupId g = ed.ring()[*index].id;
  log.entries.push_back(change::Removed{*it, g});
  members.erase(it);

  repair_in_place(ed, policy, strategies, g, guard, true, log);
  return {std::move(ed).release(), std::move(log)};
}

OperatorResult remove_worker(const RotationState& state, const OperatorPolicy& policy,
                             const StrategySet& strategies, const std::string& worker) {
  return remove_worker(state, policy, strategies, worker, FollowsGuard::of(state));
}

OperatorResult split_group(const RotationState& state, const OperatorPolicy& policy, const GroupId& g) {
  ChangeLog log;
  StateEditor ed(state);
  split_in_place(ed, policy, state.index_of(g), log);
  return {std::move(ed).release(), std::move(log)};
}

JoinPlan plan_join(const RotationState& state, const GroupId& deficient) {
  const GroupId& current = state.current();
  if (deficient == current) return {current, state.predecessor(current)};
  if (state.successor(deficient) == current) return {current, deficient};
  return {deficient, state.successor(deficient)};
}

OperatorResult join_groups(const RotationState& state, const OperatorPolicy& policy, const GroupId& deficient) {
  (void)policy;
  state.index_of(deficient);
  if (state.group_count() <= 2)
    throw Error(ErrorCode::TooFewGroups, "joining would leave fewer than two groups");
  ChangeLog log;
  StateEditor ed(state);
  join_in_place(ed, plan_join(state, deficient), log);
  return {std::move(ed).release(), std::move(log)};
}

OperatorResult donate_worker(const RotationState& state, const OperatorPolicy& policy, const GroupId& from,
                             const GroupId& to, const FollowsGuard& guard, std::size_t min_donor_size) {
  if (min_donor_size == 0) min_donor_size = policy.d + 1;
  const Group& donor = state.group(from);
  state.index_of(to);
  if (donor.members.size() < min_donor_size || donor.members.empty())
    throw Error(ErrorCode::DonorTooSmall, "group " + from + " has " + std::to_string(donor.members.size()) +
                                              " < " + std::to_string(min_donor_size));
  if (guard.forbids(state, from, newest_member(donor), to))
    throw Error(ErrorCode::ForbiddenMove, "moving from " + from + " into " + to +
                                              " puts a performing worker into the next current group");
  ChangeLog log;
  StateEditor ed(state);
  donate_in_place(ed, from, to, log);
  return {std::move(ed).release(), std::move(log)};
}

OperatorResult donate_worker(const RotationState& state, const OperatorPolicy& policy, const GroupId& from,
                             const GroupId& to) {
  return donate_worker(state, policy, from, to, FollowsGuard::of(state));
}

OperatorResult repair_deficit(const RotationState& state, const OperatorPolicy& policy,
                              const StrategySet& strategies, const GroupId& g, const FollowsGuard& guard,
                              bool log_degraded) {
  ChangeLog log;
  StateEditor ed(state);
  repair_in_place(ed, policy, strategies, g, guard, log_degraded, log);
  return {std::move(ed).release(), std::move(log)};
}

}  // namespace grtc
