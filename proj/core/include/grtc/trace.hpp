// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "grtc/rotation_state.hpp"

namespace grtc {

enum class EventOp { Arrive, Depart };

struct WorkerEvent {
  double t = 0.0;
  EventOp op = EventOp::Arrive;
  WorkerId worker;

  friend bool operator==(const WorkerEvent&, const WorkerEvent&) = default;
};

/// Initial roster plus a time-ordered change stream. Sequence numbers are
/// assigned in order of first appearance: roster first, then arrivals.
struct Trace {
  std::vector<WorkerId> initial;
  std::vector<WorkerEvent> events;

  friend bool operator==(const Trace&, const Trace&) = default;
};

/// Poisson arrivals and exponential sojourns. A rate of 0 disables the
/// corresponding process.
struct TraceConfig {
  std::uint64_t seed = 1;
  double duration = 1000.0;
  double arrival_rate = 1.0;
  double departure_rate = 0.01;  // 1 / mean sojourn
  std::size_t initial_workers = 10;

  void validate() const;
};

/// Workers are named w1, w2, ... in arrival order (roster first). Each worker
/// departs after an exponential sojourn unless that falls past `duration`.
Trace generate_trace(const TraceConfig& config);

/// JSON Lines: a header {"format":"grtc-trace","v":1,"initial":[...]} then
/// one {"t":..,"op":"arrive"|"depart","worker":".."} per line.
void write_trace(std::ostream& out, const Trace& trace);
void write_trace_file(const std::filesystem::path& path, const Trace& trace);

/// Throws FileError with ParseError, OrderError or ConsistencyError and the
/// offending 1-based line number.
Trace read_trace(std::istream& in, const std::string& name = "<stream>");
Trace read_trace_file(const std::filesystem::path& path);

}  // namespace grtc
