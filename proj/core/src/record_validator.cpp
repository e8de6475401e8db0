// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#include "grtc/record_validator.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace grtc {
namespace {

using Json = nlohmann::ordered_json;

struct Snapshot {
  long step = -1;
  std::string current;
  std::vector<std::string> ring;
  std::map<std::string, std::vector<std::string>> members;

  std::size_t position(const std::string& g) const {
    return static_cast<std::size_t>(std::find(ring.begin(), ring.end(), g) - ring.begin());
  }
  bool has_group(const std::string& g) const { return position(g) < ring.size(); }
  const std::string& next_of(const std::string& g) const { return ring[(position(g) + 1) % ring.size()]; }

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

std::optional<Snapshot> parse_snapshot(const Json& j, long index, ValidationReport& report) {
  try {
    Snapshot s;
    s.step = j.at("step").get<long>();
    s.current = j.at("current").get<std::string>();
    s.ring = j.at("ring").get<std::vector<std::string>>();
    for (const auto& [g, ws] : j.at("members").items()) s.members[g] = ws.get<std::vector<std::string>>();
    return s;
  } catch (const Json::exception& e) {
    report.add(ViolationCode::MalformedRecord, std::string("state: ") + e.what(), index);
    return std::nullopt;
  }
}

void check_snapshot(const Snapshot& s, std::optional<std::size_t> d, ValidationReport& report) {
  const long step = s.step;
  if (s.ring.size() < 2) report.add(ViolationCode::TooFewGroups, std::to_string(s.ring.size()) + " group(s)", step);

  std::set<std::string> in_ring;
  for (const auto& g : s.ring)
    if (!in_ring.insert(g).second) report.add(ViolationCode::NotSingleCycle, g + " repeats in the ring", step);
  for (const auto& [g, _] : s.members)
    if (!in_ring.contains(g)) report.add(ViolationCode::NotSingleCycle, g + " has members but is off the ring", step);
  if (!in_ring.contains(s.current)) report.add(ViolationCode::CurrentMissing, s.current + " not in ring", step);

  std::map<std::string, std::string> owner;
  std::size_t n = 0;
  for (const auto& g : s.ring) {
    auto it = s.members.find(g);
    if (it == s.members.end() || it->second.empty()) {
      report.add(ViolationCode::EmptyGroup, g + " has no workers", step);
      continue;
    }
    for (const auto& w : it->second) {
      ++n;
      auto [pos, fresh] = owner.emplace(w, g);
      if (!fresh) report.add(ViolationCode::NotPartition, w + " in " + pos->second + " and " + g, step);
    }
  }

  if (d) {
    for (const auto& g : s.ring) {
      auto it = s.members.find(g);
      const std::size_t size = it == s.members.end() ? 0 : it->second.size();
      if (size >= *d) continue;
      report.add(n < 2 * *d ? ViolationCode::BelowFloorDegraded : ViolationCode::BelowFloor,
                 g + " has " + std::to_string(size) + " < d", step);
    }
  }
}

void check_follows(const Snapshot& prev, const Snapshot& next, ValidationReport& report) {
  const long step = next.step;
  auto prev_it = prev.members.find(prev.current);
  auto next_it = next.members.find(next.current);
  if (prev_it != prev.members.end() && next_it != next.members.end()) {
    std::set<std::string> performed(prev_it->second.begin(), prev_it->second.end());
    for (const auto& w : next_it->second)
      if (performed.contains(w))
        report.add(ViolationCode::FollowsOverlap, w + " performed in " + prev.current + " and sits in " + next.current,
                   step);
  }
  if (!next.has_group(prev.current)) {
    report.add(ViolationCode::FollowsCurrentGone, prev.current + " vanished", step);
  } else if (next.next_of(prev.current) != next.current) {
    report.add(ViolationCode::FollowsWrongSuccessor,
               next.current + " is not the successor of " + prev.current + " (ring has " +
                   next.next_of(prev.current) + ")",
               step);
  }
}

// Name-level replay of one change log against `prev`, then advance.
std::optional<Snapshot> replay(const Snapshot& prev, const Json& log, std::string& error) {
  Snapshot s = prev;
  auto take = [&](const std::string& g, const std::string& w) {
    auto& list = s.members[g];
    auto it = std::find(list.begin(), list.end(), w);
    if (it == list.end()) {
      error = w + " not in " + g;
      return false;
    }
    list.erase(it);
    return true;
  };
  auto known = [&](const std::string& g) {
    if (s.has_group(g)) return true;
    error = "unknown group " + g;
    return false;
  };

  try {
    for (const auto& e : log) {
      const auto type = e.at("type").get<std::string>();
      if (type == "inserted") {
        const auto g = e.at("group").get<std::string>();
        if (!known(g)) return std::nullopt;
        s.members[g].push_back(e.at("worker").get<std::string>());
      } else if (type == "removed") {
        if (!take(e.at("group").get<std::string>(), e.at("worker").get<std::string>())) return std::nullopt;
      } else if (type == "split") {
        const auto g = e.at("group").get<std::string>();
        const auto fresh = e.at("new_group").get<std::string>();
        if (!known(g)) return std::nullopt;
        if (s.has_group(fresh)) {
          error = "split reuses live group " + fresh;
          return std::nullopt;
        }
        const auto moved = e.at("moved").get<std::vector<std::string>>();
        for (const auto& w : moved)
          if (!take(g, w)) return std::nullopt;
        const std::size_t at = s.position(g);
        const std::size_t cur = s.position(s.current);
        const std::size_t pos = at == cur ? (cur == 0 ? s.ring.size() : cur) : at + 1;
        s.ring.insert(s.ring.begin() + static_cast<std::ptrdiff_t>(pos), fresh);
        s.members[fresh] = moved;
      } else if (type == "joined") {
        const auto survivor = e.at("survivor").get<std::string>();
        const auto absorbed = e.at("absorbed").get<std::string>();
        if (!known(survivor) || !known(absorbed)) return std::nullopt;
        if (absorbed == s.current) {
          error = "join absorbs the current group";
          return std::nullopt;
        }
        const auto moved = e.at("moved").get<std::vector<std::string>>();
        if (s.members[absorbed] != moved) {
          error = "join moved-list differs from " + absorbed;
          return std::nullopt;
        }
        auto& dst = s.members[survivor];
        dst.insert(dst.end(), moved.begin(), moved.end());
        s.members.erase(absorbed);
        s.ring.erase(s.ring.begin() + static_cast<std::ptrdiff_t>(s.position(absorbed)));
      } else if (type == "donated") {
        const auto from = e.at("from").get<std::string>();
        const auto to = e.at("to").get<std::string>();
        const auto w = e.at("worker").get<std::string>();
        if (!known(to) || !take(from, w)) return std::nullopt;
        s.members[to].push_back(w);
      } else if (type == "degraded" || type == "stalled") {
        // informational
      } else {
        error = "unknown change type " + type;
        return std::nullopt;
      }
    }
  } catch (const Json::exception& ex) {
    error = ex.what();
    return std::nullopt;
  }
  s.current = s.next_of(s.current);
  return s;
}

}  // namespace

ValidationReport validate_record(const Json& record) {
  ValidationReport report;
  if (!record.is_object() || !record.contains("v") || record["v"] != 1) {
    report.add(ViolationCode::MalformedRecord, "missing or unsupported \"v\"");
    return report;
  }
  if (!record.contains("states") || !record["states"].is_array() || record["states"].empty() ||
      !record.contains("change_logs") || !record["change_logs"].is_array()) {
    report.add(ViolationCode::MalformedRecord, "record needs \"states\" and \"change_logs\" arrays");
    return report;
  }
  const auto& states = record["states"];
  const auto& logs = record["change_logs"];
  if (logs.size() + 1 != states.size()) {
    report.add(ViolationCode::MalformedRecord, "expected one change log per transition");
    return report;
  }

  std::optional<std::size_t> d;
  if (record.contains("config") && record["config"].is_object() && record["config"].contains("d") &&
      record["config"]["d"].is_number_integer() && record["config"]["d"].get<long>() >= 1)
    d = record["config"]["d"].get<std::size_t>();

  std::set<std::size_t> reseeds;
  if (record.contains("stalls") && record["stalls"].is_array()) {
    for (const auto& st : record["stalls"]) {
      if (st.is_object() && st.value("reseeded", false) && st.contains("resume_state") &&
          st["resume_state"].is_number_integer() && st["resume_state"].get<long>() >= 0)
        reseeds.insert(st["resume_state"].get<std::size_t>());
    }
  }

  std::vector<std::optional<Snapshot>> snaps;
  for (std::size_t k = 0; k < states.size(); ++k) {
    snaps.push_back(parse_snapshot(states[k], static_cast<long>(k), report));
    if (snaps.back()) check_snapshot(*snaps.back(), d, report);
  }

  for (std::size_t k = 0; k + 1 < states.size(); ++k) {
    if (!snaps[k] || !snaps[k + 1]) continue;
    const Snapshot& prev = *snaps[k];
    const Snapshot& next = *snaps[k + 1];
    if (next.step <= prev.step)
      report.add(ViolationCode::StepOrder, "step " + std::to_string(next.step) + " after " + std::to_string(prev.step),
                 next.step);
    if (reseeds.contains(k + 1)) continue;
    if (!prev.has_group(prev.current) || !next.has_group(next.current)) continue;

    check_follows(prev, next, report);

    std::string error;
    auto replayed = replay(prev, logs[k], error);
    if (!replayed) {
      report.add(ViolationCode::ReplayMismatch, "change log does not apply: " + error, next.step);
      continue;
    }
    replayed->step = next.step;
    // Empty member lists never reach the serialized form.
    std::erase_if(replayed->members, [](const auto& kv) { return kv.second.empty(); });
    if (!(*replayed == next)) report.add(ViolationCode::ReplayMismatch, "replayed state differs", next.step);
  }
  return report;
}

}  // namespace grtc
