// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#include "grtc/strategies.hpp"

#include <algorithm>
#include <charconv>
#include <iterator>

#include "grtc/error.hpp"

namespace grtc {

void OperatorPolicy::validate() const {
  if (d < 1) throw Error(ErrorCode::InvalidConfig, "d must be >= 1");
  if (max_multiplier < 2) throw Error(ErrorCode::InvalidConfig, "max_multiplier must be >= 2");
  if (find_horizon < 1) throw Error(ErrorCode::InvalidConfig, "find horizon must be >= 1");
}

std::string_view to_string(ChooseKind kind) noexcept {
  switch (kind) {
    case ChooseKind::Random: return "random";
    case ChooseKind::Farthest: return "farthest";
    case ChooseKind::Concentrated: return "concentrated";
    case ChooseKind::Balanced: return "balanced";
    case ChooseKind::Hybrid: return "hybrid";
  }
  return "?";
}

std::string_view to_string(FindOrder order) noexcept {
  return order == FindOrder::PredFirst ? "pred-first" : "succ-first";
}

std::optional<ChooseKind> parse_choose(std::string_view name) noexcept {
  for (auto k : {ChooseKind::Random, ChooseKind::Farthest, ChooseKind::Concentrated, ChooseKind::Balanced,
                 ChooseKind::Hybrid})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

std::optional<FindOrder> parse_find_order(std::string_view name) noexcept {
  if (name == "pred-first") return FindOrder::PredFirst;
  if (name == "succ-first") return FindOrder::SuccFirst;
  return std::nullopt;
}

std::string horizon_to_string(std::size_t horizon) {
  return horizon == OperatorPolicy::kUnlimited ? "unlimited" : std::to_string(horizon);
}

std::optional<std::size_t> parse_horizon(std::string_view text) noexcept {
  if (text == "unlimited") return OperatorPolicy::kUnlimited;
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0) return std::nullopt;
  return value;
}

FollowsGuard FollowsGuard::of(const RotationState& state) {
  FollowsGuard guard{state.current(), {}};
  for (const auto& w : state.current_group().members) guard.performed.insert(w.id);
  return guard;
}

bool FollowsGuard::forbids(const RotationState& state, const GroupId& from, const WorkerId& moved,
                           const GroupId& to) const {
  if (to != state.successor(current)) return false;
  return from == current || performed.contains(moved.id);
}

namespace {

struct Candidate {
  std::size_t index;
  std::size_t size;
  std::size_t counter;
};

std::vector<Candidate> candidates(const RotationState& state) {
  std::vector<Candidate> out;
  const auto ring = state.ring();
  const std::size_t m = ring.size();
  for (std::size_t i = 0; i < m; ++i)
    out.push_back({i, ring[i].members.size(), (i + m - state.current_index()) % m});
  return out;
}

// Smallest size, then largest counter, then id.
std::size_t pick_smallest(const RotationState& state, const std::vector<Candidate>& pool) {
  const auto ring = state.ring();
  auto it = std::min_element(pool.begin(), pool.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.size != b.size) return a.size < b.size;
    if (a.counter != b.counter) return a.counter > b.counter;
    return ring[a.index].id < ring[b.index].id;
  });
  return it->index;
}

}  // namespace

GroupId choose_group(const RotationState& state, const OperatorPolicy& policy, ChooseKind kind, Rng& rng) {
  const auto ring = state.ring();
  const std::size_t m = ring.size();
  const std::size_t cur = state.current_index();
  const auto pool = candidates(state);

  switch (kind) {
    case ChooseKind::Random:
      return ring[(cur + rng.index(m)) % m].id;
    case ChooseKind::Farthest:
      return ring[(cur + m - 1) % m].id;
    case ChooseKind::Concentrated: {
      // Largest size, then smallest counter, then id.
      auto it = std::min_element(pool.begin(), pool.end(), [&](const Candidate& a, const Candidate& b) {
        if (a.size != b.size) return a.size > b.size;
        if (a.counter != b.counter) return a.counter < b.counter;
        return ring[a.index].id < ring[b.index].id;
      });
      return ring[it->index].id;
    }
    case ChooseKind::Balanced:
      return ring[pick_smallest(state, pool)].id;
    case ChooseKind::Hybrid: {
      std::vector<Candidate> at_risk;
      std::copy_if(pool.begin(), pool.end(), std::back_inserter(at_risk),
                   [&](const Candidate& c) { return c.size <= policy.d; });
      if (at_risk.empty()) return ring[(cur + m - 1) % m].id;
      return ring[pick_smallest(state, at_risk)].id;
    }
  }
  throw Error(ErrorCode::InvalidConfig, "unknown choose strategy");
}

std::pair<std::vector<WorkerId>, std::vector<WorkerId>> partition_for_split(std::span<const WorkerId> members) {
  if (members.size() < 2) throw Error(ErrorCode::TooSmall, "cannot split fewer than two workers");
  std::vector<std::uint64_t> seqs;
  seqs.reserve(members.size());
  for (const auto& w : members) seqs.push_back(w.seq);
  const std::size_t keep = (members.size() + 1) / 2;
  std::nth_element(seqs.begin(), seqs.begin() + static_cast<std::ptrdiff_t>(keep - 1), seqs.end());
  const std::uint64_t cutoff = seqs[keep - 1];

  std::pair<std::vector<WorkerId>, std::vector<WorkerId>> out;
  for (const auto& w : members) (w.seq <= cutoff ? out.first : out.second).push_back(w);
  return out;
}

const WorkerId& newest_member(const Group& group) {
  return *std::max_element(group.members.begin(), group.members.end(),
                           [](const WorkerId& a, const WorkerId& b) { return a.seq < b.seq; });
}

std::optional<GroupId> find_donor(const RotationState& state, const GroupId& deficient, FindOrder order,
                                  std::size_t horizon, std::size_t min_size, const FollowsGuard& guard) {
  const auto ring = state.ring();
  const std::size_t m = ring.size();
  const std::size_t origin = state.index_of(deficient);
  std::vector<bool> seen(m, false);
  seen[origin] = true;

  for (std::size_t hop = 1; hop < m && hop <= horizon; ++hop) {
    const std::size_t pred = (origin + m - hop % m) % m;
    const std::size_t succ = (origin + hop) % m;
    const std::size_t first = order == FindOrder::PredFirst ? pred : succ;
    const std::size_t second = order == FindOrder::PredFirst ? succ : pred;
    for (std::size_t i : {first, second}) {
      if (seen[i]) continue;
      seen[i] = true;
      const Group& g = ring[i];
      if (g.members.size() < min_size || g.members.empty()) continue;
      if (guard.forbids(state, g.id, newest_member(g), deficient)) continue;
      return g.id;
    }
  }
  return std::nullopt;
}

std::optional<GroupId> find_donor(const RotationState& state, const OperatorPolicy& policy,
                                  const GroupId& deficient, FindOrder order, std::size_t horizon) {
  return find_donor(state, deficient, order, horizon, policy.d + 1, FollowsGuard::of(state));
}

}  // namespace grtc
