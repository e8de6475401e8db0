// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#include "grtc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "grtc/error.hpp"

namespace grtc {

void StressWeights::validate() const {
  for (double w : {alpha, beta, gamma})
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::InvalidConfig, "stress weights must be >= 0");
}

std::vector<WorkerStress> transition_stress(const RotationState& prev, const RotationState& next,
                                            const StressWeights& weights, const ChangeLog& log) {
  if (auto report = validate_pair(prev, next); !report.ok())
    throw Error(ErrorCode::InvalidPair, describe(report));

  std::unordered_set<std::string> restructured;
  for (const auto& entry : log.entries) {
    std::visit(
        [&](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, change::Split> || std::is_same_v<T, change::Joined>) {
            for (const auto& w : e.moved) restructured.insert(w.id);
          } else if constexpr (std::is_same_v<T, change::Donated>) {
            restructured.insert(e.worker.id);
          }
        },
        entry);
  }

  std::unordered_map<std::string, std::size_t> prev_group;
  const auto prev_ring = prev.ring();
  for (std::size_t i = 0; i < prev_ring.size(); ++i)
    for (const auto& w : prev_ring[i].members) prev_group.emplace(w.id, i);

  const std::size_t m_prev = prev.group_count();
  const std::size_t m_next = next.group_count();
  std::vector<WorkerStress> out;
  const auto next_ring = next.ring();
  for (std::size_t i = 0; i < next_ring.size(); ++i) {
    const std::size_t actual = (i + m_next - next.current_index()) % m_next;
    for (const auto& w : next_ring[i].members) {
      auto it = prev_group.find(w.id);
      if (it == prev_group.end()) continue;  // arrived during this transition
      const std::size_t before = (it->second + m_prev - prev.current_index()) % m_prev;
      WorkerStress s;
      s.worker = w.id;
      s.expected_counter = before == 0 ? m_next - 1 : before - 1;
      s.actual_counter = actual;
      s.drop = s.expected_counter > actual ? s.expected_counter - actual : 0;
      s.rise = actual > s.expected_counter ? actual - s.expected_counter : 0;
      s.moved = prev_ring[it->second].id != next_ring[i].id && restructured.contains(w.id);
      s.score = weights.alpha * static_cast<double>(s.drop) + weights.beta * static_cast<double>(s.rise) +
                weights.gamma * (s.moved ? 1.0 : 0.0);
      out.push_back(std::move(s));
    }
  }
  return out;
}

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

}  // namespace

RunReport summarize_run(const RunRecord& record, const StressWeights& weights) {
  weights.validate();
  if (record.states.empty()) throw Error(ErrorCode::CorruptRecord, "record has no states");
  if (record.change_logs.size() + 1 != record.states.size())
    throw Error(ErrorCode::CorruptRecord, "expected one change log per transition");

  RunReport report;
  double inverse_sum = 0.0;
  double m_sum = 0.0;
  for (const auto& s : record.states) {
    const std::size_t m = s.group_count();
    report.group_counts.push_back(m);
    m_sum += static_cast<double>(m);
    inverse_sum += 1.0 / static_cast<double>(m);
    for (const auto& w : s.current_group().members) ++report.workers[w.id].tasks;
    for (const auto& g : s.ring())
      for (const auto& w : g.members) ++report.workers[w.id].presence;
  }
  const auto n_states = static_cast<double>(record.states.size());
  report.mean_m = m_sum / n_states;
  report.burden = inverse_sum / n_states;
  report.min_m = *std::min_element(report.group_counts.begin(), report.group_counts.end());
  report.max_m = *std::max_element(report.group_counts.begin(), report.group_counts.end());

  for (std::size_t k = 0; k < record.change_logs.size(); ++k) {
    const ChangeLog& log = record.change_logs[k];
    report.splits += log.count_splits();
    report.joins += log.count_joins();
    report.donations += log.count_donations();
    if (record.is_reseed(k)) {
      ++report.reseeds;
      continue;
    }
    std::vector<WorkerStress> stress;
    try {
      stress = transition_stress(record.states[k], record.states[k + 1], weights, log);
    } catch (const Error& e) {
      throw Error(ErrorCode::CorruptRecord, "transition " + std::to_string(k) + ": " + e.what());
    }
    for (const auto& s : stress) {
      auto& totals = report.workers[s.worker];
      totals.stress += s.score;
      totals.drops += s.drop;
      totals.rises += s.rise;
      totals.moves += s.moved ? 1 : 0;
      report.total_drop += s.drop;
      report.total_rise += s.rise;
      report.total_moves += s.moved ? 1 : 0;
      report.stress_score += s.score;
    }
  }

  std::vector<double> per_worker;
  double share_sum = 0.0;
  for (const auto& [_, totals] : report.workers) {
    per_worker.push_back(totals.stress);
    if (totals.presence > 0) share_sum += static_cast<double>(totals.tasks) / static_cast<double>(totals.presence);
  }
  std::sort(per_worker.begin(), per_worker.end());
  if (!report.workers.empty()) report.mean_task_share = share_sum / static_cast<double>(report.workers.size());
  report.stress_p50 = quantile(per_worker, 0.50);
  report.stress_p90 = quantile(per_worker, 0.90);
  report.stress_p99 = quantile(per_worker, 0.99);
  report.stress_max = per_worker.empty() ? 0.0 : per_worker.back();

  for (const auto& s : record.stalls) report.stall_time += s.duration;
  return report;
}

}  // namespace grtc
