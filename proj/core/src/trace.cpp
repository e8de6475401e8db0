// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#include "grtc/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <unordered_map>

#include "grtc/error.hpp"
#include "grtc/rng.hpp"

namespace grtc {

void TraceConfig::validate() const {
  if (!(duration >= 0.0) || !std::isfinite(duration)) throw Error(ErrorCode::InvalidConfig, "duration must be >= 0");
  if (!(arrival_rate >= 0.0) || !std::isfinite(arrival_rate))
    throw Error(ErrorCode::InvalidConfig, "arrival_rate must be >= 0");
  if (!(departure_rate >= 0.0) || !std::isfinite(departure_rate))
    throw Error(ErrorCode::InvalidConfig, "departure_rate must be >= 0");
  if (initial_workers < 2) throw Error(ErrorCode::InvalidConfig, "initial_workers must be >= 2");
}

Trace generate_trace(const TraceConfig& config) {
  config.validate();
  Rng rng(config.seed);
  Trace trace;

  std::vector<double> arrived_at(config.initial_workers, 0.0);
  if (config.arrival_rate > 0.0) {
    for (double t = rng.exponential(config.arrival_rate); t <= config.duration;
         t += rng.exponential(config.arrival_rate))
      arrived_at.push_back(t);
  }

  std::vector<WorkerEvent> events;
  for (std::size_t i = 0; i < arrived_at.size(); ++i) {
    WorkerId w{"w" + std::to_string(i + 1), i};
    if (i < config.initial_workers)
      trace.initial.push_back(w);
    else
      events.push_back({arrived_at[i], EventOp::Arrive, w});
    if (config.departure_rate > 0.0) {
      const double leave = arrived_at[i] + rng.exponential(config.departure_rate);
      if (leave <= config.duration) events.push_back({leave, EventOp::Depart, w});
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const WorkerEvent& a, const WorkerEvent& b) { return a.t < b.t; });
  trace.events = std::move(events);
  return trace;
}

void write_trace(std::ostream& out, const Trace& trace) {
  nlohmann::ordered_json header;
  header["format"] = "grtc-trace";
  header["v"] = 1;
  header["initial"] = nlohmann::ordered_json::array();
  for (const auto& w : trace.initial) header["initial"].push_back(w.id);
  out << header.dump() << '\n';
  for (const auto& e : trace.events) {
    nlohmann::ordered_json line;
    line["t"] = e.t;
    line["op"] = e.op == EventOp::Arrive ? "arrive" : "depart";
    line["worker"] = e.worker.id;
    out << line.dump() << '\n';
  }
}

void write_trace_file(const std::filesystem::path& path, const Trace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_trace(out, trace);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

Trace read_trace(std::istream& in, const std::string& name) {
  Trace trace;
  std::string text;
  std::size_t line_no = 0;
  bool have_header = false;
  std::uint64_t next_seq = 0;
  // worker id -> present?
  std::unordered_map<std::string, bool> seen;
  double last_t = -INFINITY;

  auto fail = [&](ErrorCode code, const std::string& what) -> FileError {
    return FileError(code, name, line_no, what);
  };

  while (std::getline(in, text)) {
    ++line_no;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw fail(ErrorCode::ParseError, e.what());
    }
    if (!j.is_object()) throw fail(ErrorCode::ParseError, "expected a JSON object");

    if (!have_header) {
      if (j.value("format", "") != "grtc-trace") throw fail(ErrorCode::ParseError, "missing grtc-trace header");
      if (!j.contains("v") || j["v"] != 1) throw fail(ErrorCode::ParseError, "unsupported trace version");
      if (!j.contains("initial") || !j["initial"].is_array())
        throw fail(ErrorCode::ParseError, "header needs an \"initial\" array");
      for (const auto& id : j["initial"]) {
        if (!id.is_string()) throw fail(ErrorCode::ParseError, "initial worker ids must be strings");
        auto w = id.get<std::string>();
        if (seen.contains(w)) throw fail(ErrorCode::ConsistencyError, "worker " + w + " listed twice");
        seen[w] = true;
        trace.initial.push_back({w, next_seq++});
      }
      have_header = true;
      continue;
    }

    if (!j.contains("t") || !j["t"].is_number() || !j.contains("op") || !j["op"].is_string() ||
        !j.contains("worker") || !j["worker"].is_string())
      throw fail(ErrorCode::ParseError, "event needs numeric \"t\", string \"op\" and string \"worker\"");
    const double t = j["t"].get<double>();
    const auto op_name = j["op"].get<std::string>();
    const auto worker = j["worker"].get<std::string>();
    if (!std::isfinite(t)) throw fail(ErrorCode::ParseError, "non-finite timestamp");
    if (t < last_t) throw fail(ErrorCode::OrderError, "timestamp " + std::to_string(t) + " precedes previous event");
    last_t = t;

    WorkerEvent e;
    e.t = t;
    if (op_name == "arrive") {
      e.op = EventOp::Arrive;
      if (seen.contains(worker))
        throw fail(ErrorCode::ConsistencyError, "worker " + worker + " arrives but was already seen");
      seen[worker] = true;
      e.worker = {worker, next_seq++};
    } else if (op_name == "depart") {
      e.op = EventOp::Depart;
      auto it = seen.find(worker);
      if (it == seen.end() || !it->second)
        throw fail(ErrorCode::ConsistencyError, "worker " + worker + " departs but is not present");
      it->second = false;
      e.worker = {worker, 0};
    } else {
      throw fail(ErrorCode::ParseError, "unknown op \"" + op_name + "\"");
    }
    trace.events.push_back(std::move(e));
  }
  if (!have_header) throw FileError(ErrorCode::ParseError, name, line_no, "empty trace");

  // Departures carry the seq their worker was given on arrival.
  std::unordered_map<std::string, std::uint64_t> seq_of;
  for (const auto& w : trace.initial) seq_of[w.id] = w.seq;
  for (auto& e : trace.events) {
    if (e.op == EventOp::Arrive)
      seq_of[e.worker.id] = e.worker.seq;
    else
      e.worker.seq = seq_of.at(e.worker.id);
  }
  return trace;
}

Trace read_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError(ErrorCode::IoError, path.string(), 0, "cannot open");
  return read_trace(in, path.string());
}

}  // namespace grtc
