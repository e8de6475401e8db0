// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "grtc/change_log.hpp"
#include "grtc/generator.hpp"
#include "grtc/rotation_state.hpp"

namespace grtc {

/// Linear stress model: alpha per unit of counter drop, beta per unit of
/// counter rise, gamma per forced group move.
struct StressWeights {
  double alpha = 1.0;
  double beta = 0.25;
  double gamma = 0.5;

  void validate() const;
};

struct WorkerStress {
  std::string worker;
  std::size_t expected_counter = 0;
  std::size_t actual_counter = 0;
  std::size_t drop = 0;
  std::size_t rise = 0;
  bool moved = false;
  double score = 0.0;
};

/// Per-worker stress for workers present in both states, in `next` ring order.
///
/// Throws Error{InvalidPair} unless `next` follows `prev`.
std::vector<WorkerStress> transition_stress(const RotationState& prev, const RotationState& next,
                                            const StressWeights& weights, const ChangeLog& log);

struct WorkerTotals {
  double stress = 0.0;
  std::size_t drops = 0;  // summed drop magnitude
  std::size_t rises = 0;
  std::size_t moves = 0;
  std::size_t tasks = 0;     // states in which the worker sat in the current group
  std::size_t presence = 0;  // states in which the worker was present
};

struct RunReport {
  std::vector<std::size_t> group_counts;  // m per state
  double mean_m = 0.0;
  std::size_t min_m = 0;
  std::size_t max_m = 0;
  double burden = 0.0;  // mean of 1/m over states
  double mean_task_share = 0.0;  // mean over workers of tasks / presence

  std::map<std::string, WorkerTotals> workers;
  std::size_t total_drop = 0;
  std::size_t total_rise = 0;
  std::size_t total_moves = 0;
  double stress_score = 0.0;
  // Quantiles of per-worker total stress.
  double stress_p50 = 0.0;
  double stress_p90 = 0.0;
  double stress_p99 = 0.0;
  double stress_max = 0.0;

  std::size_t splits = 0;
  std::size_t joins = 0;
  std::size_t donations = 0;
  std::size_t reseeds = 0;
  double stall_time = 0.0;
};

/// Deterministic aggregation over every transition. Reseed transitions carry
/// no stress (the counters restart). Throws Error{CorruptRecord} when the
/// record is internally inconsistent.
RunReport summarize_run(const RunRecord& record, const StressWeights& weights);

}  // namespace grtc
