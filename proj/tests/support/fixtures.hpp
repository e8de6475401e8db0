// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "grtc/generator.hpp"
#include "grtc/rng.hpp"
#include "grtc/rotation_state.hpp"

namespace grtc::testing {

using Layout = std::vector<std::pair<GroupId, std::vector<std::string>>>;

// Workers get seq in order of first appearance.
inline RotationState make_state(const Layout& layout, const GroupId& current, std::uint64_t step = 0) {
  auto built = build_state_from_names(layout, current, step);
  if (auto* report = std::get_if<ValidationReport>(&built)) throw std::invalid_argument(describe(*report));
  return std::get<RotationState>(std::move(built));
}

// 9 workers; g1 = {w1,w2,w3}, g2 = {w4,w5}, g3 = {w6..w9}; p = g1.
inline RotationState fig1() {
  return make_state({{"g1", {"w1", "w2", "w3"}}, {"g2", {"w4", "w5"}}, {"g3", {"w6", "w7", "w8", "w9"}}}, "g1");
}

// Groups A, B, C, ... with the given sizes, workers w1, w2, ... dealt in ring order.
inline RotationState sized(const std::vector<std::size_t>& sizes, std::size_t current = 0) {
  Layout layout;
  std::size_t k = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    std::vector<std::string> names;
    for (std::size_t j = 0; j < sizes[i]; ++j) names.push_back("w" + std::to_string(++k));
    layout.emplace_back(std::string(1, static_cast<char>('A' + i)), std::move(names));
  }
  return make_state(layout, layout[current].first);
}

inline std::vector<std::size_t> sizes(const RotationState& s) {
  std::vector<std::size_t> out;
  for (const auto& g : s.ring()) out.push_back(g.members.size());
  return out;
}

inline std::vector<GroupId> ring_ids(const RotationState& s) {
  std::vector<GroupId> out;
  for (const auto& g : s.ring()) out.push_back(g.id);
  return out;
}

inline std::vector<std::string> names(const std::vector<WorkerId>& ws) {
  std::vector<std::string> out;
  for (const auto& w : ws) out.push_back(w.id);
  return out;
}

inline std::vector<std::string> member_names(const RotationState& s, const GroupId& g) {
  return names(s.group(g).members);
}

// Random valid state: n workers over m non-empty groups, random current.
inline RotationState random_state(Rng& rng, std::size_t n, std::size_t m) {
  std::vector<std::size_t> cuts;
  std::vector<std::size_t> size(m, 1);
  for (std::size_t i = m; i < n; ++i) ++size[rng.index(m)];
  Layout layout;
  std::size_t k = 0;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::string> ws;
    for (std::size_t j = 0; j < size[i]; ++j) ws.push_back("w" + std::to_string(++k));
    layout.emplace_back("g" + std::to_string(i + 1), std::move(ws));
  }
  return make_state(layout, layout[rng.index(m)].first);
}

inline WorkerEvent arrive(double t, const std::string& id, std::uint64_t seq) {
  return {t, EventOp::Arrive, {id, seq}};
}
inline WorkerEvent depart(double t, const std::string& id, std::uint64_t seq = 0) {
  return {t, EventOp::Depart, {id, seq}};
}

}  // namespace grtc::testing
