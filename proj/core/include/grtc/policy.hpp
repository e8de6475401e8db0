// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace grtc {

/// Numeric restructuring policy. Groups aim for at least `d` members and are
/// split once they exceed max(d) = max_multiplier * d.
struct OperatorPolicy {
  static constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

  std::size_t d = 2;
  std::size_t max_multiplier = 2;
  std::size_t find_horizon = kUnlimited;  // ring hops scanned for a donor

  std::size_t max_size() const noexcept { return max_multiplier * d; }

  /// Throws Error{InvalidConfig} unless d >= 1, max_multiplier >= 2, horizon >= 1.
  void validate() const;
};

enum class ChooseKind { Random, Farthest, Concentrated, Balanced, Hybrid };
enum class FindOrder { PredFirst, SuccFirst };

struct StrategySet {
  ChooseKind choose = ChooseKind::Balanced;
  FindOrder find_order = FindOrder::PredFirst;
  // split is always half-and-half and join is always rule-based; neither has knobs.
};

std::string_view to_string(ChooseKind kind) noexcept;
std::string_view to_string(FindOrder order) noexcept;
std::optional<ChooseKind> parse_choose(std::string_view name) noexcept;
std::optional<FindOrder> parse_find_order(std::string_view name) noexcept;

/// "unlimited" or a positive integer.
std::string horizon_to_string(std::size_t horizon);
std::optional<std::size_t> parse_horizon(std::string_view text) noexcept;

}  // namespace grtc
