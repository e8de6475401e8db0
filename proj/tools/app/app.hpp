// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "grtc/generator.hpp"
#include "grtc/metrics.hpp"
#include "grtc/policy.hpp"
#include "grtc/serialization.hpp"
#include "grtc/trace.hpp"

namespace grtc::app {

// {interval, count, start?} or {times}. A missing count is derived from the
// trace duration; a missing start defaults to one interval.
struct ScheduleSpec {
  std::optional<std::vector<double>> times;
  std::optional<double> start;
  double interval = 1.0;
  std::optional<std::size_t> count;

  TaskSchedule resolve(std::optional<double> duration) const;
  Json to_json() const;
};

struct InitialSpec {
  std::optional<std::size_t> workers;
  std::vector<std::pair<GroupId, std::vector<std::string>>> groups;
  GroupId current;

  Json to_json() const;
};

struct RunConfig {
  OperatorPolicy policy;
  StrategySet strategies;
  StressWeights weights;
  std::uint64_t seed = 1;
  bool seed_from_env = false;
  ScheduleSpec schedule;
  InitialSpec initial;
  std::optional<TraceConfig> trace;  // seed defaults to the run seed

  Json to_json() const;
};

/// Parses a run config. `source` names the file in error messages and `text`
/// is its raw contents, used to point at the offending line.
RunConfig parse_run_config(const Json& doc, const std::string& source, const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Applies GRTC_SEED when set. Throws Error{InvalidConfig} on a bad value.
void apply_seed_override(RunConfig& config);

struct SweepSpec {
  std::vector<ChooseKind> choose;
  std::vector<FindOrder> find_orders;
  std::vector<std::size_t> horizons;
  std::vector<std::size_t> d;
  std::vector<std::size_t> max_multipliers;
  std::vector<std::uint64_t> seeds;
  std::vector<TraceConfig> traces;
  std::vector<StressWeights> weights;
  ScheduleSpec schedule;
  std::optional<std::string> output;

  std::size_t run_count() const;
};

SweepSpec parse_sweep_spec(const Json& doc, const std::string& source, const std::string& text);
SweepSpec load_sweep_spec(const std::filesystem::path& path);

/// Standalone trace generator config: seed, duration, arrival_rate,
/// departure_rate, initial_workers.
TraceConfig parse_trace_config(const Json& doc, const std::string& source, const std::string& text);
TraceConfig load_trace_config(const std::filesystem::path& path);

struct RunInputs {
  RotationState initial;
  std::vector<WorkerEvent> events;
  TaskSchedule schedule;
};

/// Builds the initial state, event stream and schedule for a run config.
RunInputs prepare_run(const RunConfig& config, const std::optional<std::filesystem::path>& trace_file);

struct RunOutput {
  RunRecord record;
  RunReport report;
};

RunOutput execute(const RunConfig& config, const RunInputs& inputs);

/// One row per sweep combination, in axis order: choose, find order, horizon,
/// d, max_multiplier, trace, weights, seed.
struct SweepRun {
  std::size_t run_id = 0;
  RunConfig config;
};
std::vector<SweepRun> expand_sweep(const SweepSpec& spec);

struct SweepRow {
  SweepRun run;
  std::optional<RunReport> report;
  std::string status = "ok";
};

/// Runs every combination on `jobs` threads. Rows come back in run_id order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned jobs);

std::string csv_header();
std::string csv_row(const SweepRow& row);
std::string format_number(double value);

/// Full command line entry point. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace grtc::app
