// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#include "grtc/serialization.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "grtc/error.hpp"

namespace grtc {
namespace {

Json names(const std::vector<WorkerId>& workers) {
  Json out = Json::array();
  for (const auto& w : workers) out.push_back(w.id);
  return out;
}

struct EntryToJson {
  Json operator()(const change::Inserted& e) const {
    return {{"type", "inserted"}, {"worker", e.worker.id}, {"group", e.group}};
  }
  Json operator()(const change::Removed& e) const {
    return {{"type", "removed"}, {"worker", e.worker.id}, {"group", e.group}};
  }
  Json operator()(const change::Split& e) const {
    return {{"type", "split"}, {"group", e.group}, {"new_group", e.new_group}, {"moved", names(e.moved)}};
  }
  Json operator()(const change::Joined& e) const {
    return {{"type", "joined"}, {"survivor", e.survivor}, {"absorbed", e.absorbed}, {"moved", names(e.moved)}};
  }
  Json operator()(const change::Donated& e) const {
    return {{"type", "donated"}, {"worker", e.worker.id}, {"from", e.from}, {"to", e.to}};
  }
  Json operator()(const change::DegradedEntered& e) const { return {{"type", "degraded"}, {"group", e.group}}; }
  Json operator()(const change::Stalled&) const { return {{"type", "stalled"}}; }
};

[[noreturn]] void corrupt(const std::string& what) { throw Error(ErrorCode::CorruptRecord, what); }

class SeqTable {
 public:
  WorkerId get(const std::string& id) {
    auto [it, _] = seq_.emplace(id, seq_.size());
    return {id, it->second};
  }

 private:
  std::unordered_map<std::string, std::uint64_t> seq_;
};

std::vector<WorkerId> workers_from(const Json& j, SeqTable& seqs) {
  if (!j.is_array()) corrupt("expected a worker list");
  std::vector<WorkerId> out;
  for (const auto& id : j) out.push_back(seqs.get(id.get<std::string>()));
  return out;
}

RotationState state_from_json(const Json& j, SeqTable& seqs) {
  std::vector<Group> ring;
  for (const auto& id : j.at("ring")) {
    const auto gid = id.get<std::string>();
    ring.push_back({gid, workers_from(j.at("members").at(gid), seqs)});
  }
  auto result = build_state(std::move(ring), j.at("current").get<std::string>(), j.at("step").get<std::uint64_t>());
  if (auto* report = std::get_if<ValidationReport>(&result)) corrupt("invalid state: " + describe(*report));
  return std::get<RotationState>(std::move(result));
}

ChangeEntry entry_from_json(const Json& j, SeqTable& seqs) {
  const auto type = j.at("type").get<std::string>();
  auto str = [&](const char* key) { return j.at(key).get<std::string>(); };
  if (type == "inserted") return change::Inserted{seqs.get(str("worker")), str("group")};
  if (type == "removed") return change::Removed{seqs.get(str("worker")), str("group")};
  if (type == "split") return change::Split{str("group"), str("new_group"), workers_from(j.at("moved"), seqs)};
  if (type == "joined") return change::Joined{str("survivor"), str("absorbed"), workers_from(j.at("moved"), seqs)};
  if (type == "donated") return change::Donated{seqs.get(str("worker")), str("from"), str("to")};
  if (type == "degraded") return change::DegradedEntered{str("group")};
  if (type == "stalled") return change::Stalled{};
  corrupt("unknown change type " + type);
}

}  // namespace

Json state_to_json(const RotationState& state) {
  Json j;
  j["step"] = state.step();
  j["current"] = state.current();
  j["ring"] = Json::array();
  j["members"] = Json::object();
  for (const auto& g : state.ring()) {
    j["ring"].push_back(g.id);
    j["members"][g.id] = names(g.members);
  }
  return j;
}

Json change_log_to_json(const ChangeLog& log) {
  Json out = Json::array();
  for (const auto& e : log.entries) out.push_back(std::visit(EntryToJson{}, e));
  return out;
}

Json record_to_json(const RunRecord& record) {
  Json j;
  j["v"] = 1;
  j["config"] = record.config;
  j["states"] = Json::array();
  for (const auto& s : record.states) j["states"].push_back(state_to_json(s));
  j["change_logs"] = Json::array();
  for (const auto& log : record.change_logs) j["change_logs"].push_back(change_log_to_json(log));
  j["times"] = record.times;
  j["stalls"] = Json::array();
  for (const auto& s : record.stalls) {
    Json st;
    st["start"] = s.start;
    st["end"] = s.end ? Json(*s.end) : Json(nullptr);
    st["duration"] = s.duration;
    st["resume_state"] = s.resume_state;
    st["reseeded"] = s.reseeded;
    j["stalls"].push_back(std::move(st));
  }
  j["unconsumed"] = record.unconsumed_events;
  return j;
}

RunRecord record_from_json(const Json& doc) {
  try {
    if (doc.at("v") != 1) corrupt("unsupported record version");
    RunRecord record;
    record.config = doc.at("config");
    SeqTable seqs;
    for (const auto& s : doc.at("states")) record.states.push_back(state_from_json(s, seqs));
    for (const auto& log_json : doc.at("change_logs")) {
      ChangeLog log;
      for (const auto& e : log_json) log.entries.push_back(entry_from_json(e, seqs));
      record.change_logs.push_back(std::move(log));
    }
    record.times = doc.at("times").get<std::vector<double>>();
    for (const auto& st : doc.at("stalls")) {
      StallInterval s;
      s.start = st.at("start").get<double>();
      if (!st.at("end").is_null()) s.end = st.at("end").get<double>();
      s.duration = st.at("duration").get<double>();
      s.resume_state = st.at("resume_state").get<std::size_t>();
      s.reseeded = st.at("reseeded").get<bool>();
      record.stalls.push_back(s);
    }
    record.unconsumed_events = doc.at("unconsumed").get<std::size_t>();
    if (record.states.empty() || record.change_logs.size() + 1 != record.states.size() ||
        record.times.size() != record.change_logs.size())
      corrupt("state, change log and time counts disagree");
    return record;
  } catch (const Json::exception& e) {
    corrupt(e.what());
  }
}

Json report_to_json(const RunReport& report) {
  Json j;
  j["group_counts"] = report.group_counts;
  j["mean_m"] = report.mean_m;
  j["min_m"] = report.min_m;
  j["max_m"] = report.max_m;
  j["burden"] = report.burden;
  j["mean_task_share"] = report.mean_task_share;
  j["total_drop"] = report.total_drop;
  j["total_rise"] = report.total_rise;
  j["total_moves"] = report.total_moves;
  j["stress_score"] = report.stress_score;
  j["stress_quantiles"] = {{"p50", report.stress_p50},
                           {"p90", report.stress_p90},
                           {"p99", report.stress_p99},
                           {"max", report.stress_max}};
  j["splits"] = report.splits;
  j["joins"] = report.joins;
  j["donations"] = report.donations;
  j["reseeds"] = report.reseeds;
  j["stall_time"] = report.stall_time;
  Json workers = Json::object();
  for (const auto& [id, t] : report.workers) {
    workers[id] = {{"stress", t.stress}, {"drops", t.drops},     {"rises", t.rises},
                   {"moves", t.moves},   {"tasks", t.tasks},     {"presence", t.presence}};
  }
  j["workers"] = std::move(workers);
  return j;
}

std::string to_text(const Json& doc) { return doc.dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace grtc
