// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "grtc/generator.hpp"
#include "grtc/metrics.hpp"
#include "grtc/record_validator.hpp"
#include "grtc/serialization.hpp"
#include "grtc/trace.hpp"

namespace {

using namespace grtc;

Trace trace_for(std::size_t workers, double duration) {
  TraceConfig tc;
  tc.seed = 1;
  tc.duration = duration;
  tc.departure_rate = 0.05;
  tc.arrival_rate = tc.departure_rate * static_cast<double>(workers);
  tc.initial_workers = workers;
  return generate_trace(tc);
}

void BM_NextStateQuiet(benchmark::State& state) {
  const OperatorPolicy policy{2, 2, OperatorPolicy::kUnlimited};
  const Trace trace = trace_for(static_cast<std::size_t>(state.range(0)), 1);
  RotationState s = build_initial_state(trace.initial, policy);
  Rng rng(1);
  for (auto _ : state) {
    s = next_state(s, policy, {}, rng, {}).state;
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_NextStateQuiet)->Arg(16)->Arg(128)->Arg(1024);

void BM_NextStateChurn(benchmark::State& state) {
  const OperatorPolicy policy{2, 2, OperatorPolicy::kUnlimited};
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const Trace trace = trace_for(n, 1);
  const RotationState start = build_initial_state(trace.initial, policy);
  Rng rng(1);
  std::uint64_t seq = n;
  for (auto _ : state) {
    // One departure of the oldest worker and one arrival per step.
    const auto workers = start.workers();
    const std::vector<WorkerEvent> batch{{1.0, EventOp::Depart, workers[seq % n]},
                                         {1.0, EventOp::Arrive, {"x" + std::to_string(seq), seq}}};
    ++seq;
    benchmark::DoNotOptimize(next_state(start, policy, {ChooseKind::Balanced, FindOrder::PredFirst}, rng, batch));
  }
}
BENCHMARK(BM_NextStateChurn)->Arg(16)->Arg(128)->Arg(1024);

void BM_RunRotation(benchmark::State& state) {
  const OperatorPolicy policy{2, 2, OperatorPolicy::kUnlimited};
  const Trace trace = trace_for(static_cast<std::size_t>(state.range(0)), 500);
  const RotationState start = build_initial_state(trace.initial, policy);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_rotation(start, policy, {}, TaskSchedule::periodic(1, 1, 500), trace.events, 1));
  }
  state.SetItemsProcessed(state.iterations() * 500);
}
BENCHMARK(BM_RunRotation)->Arg(16)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SummarizeRun(benchmark::State& state) {
  const OperatorPolicy policy{2, 2, OperatorPolicy::kUnlimited};
  const Trace trace = trace_for(100, 500);
  const RunRecord rec = run_rotation(build_initial_state(trace.initial, policy), policy, {},
                                     TaskSchedule::periodic(1, 1, 500), trace.events, 1);
  for (auto _ : state) benchmark::DoNotOptimize(summarize_run(rec, {}));
}
BENCHMARK(BM_SummarizeRun)->Unit(benchmark::kMillisecond);

void BM_ValidateRecord(benchmark::State& state) {
  const OperatorPolicy policy{2, 2, OperatorPolicy::kUnlimited};
  const Trace trace = trace_for(100, 500);
  RunRecord rec = run_rotation(build_initial_state(trace.initial, policy), policy, {},
                               TaskSchedule::periodic(1, 1, 500), trace.events, 1);
  rec.config = {{"d", 2}};
  const Json doc = record_to_json(rec);
  for (auto _ : state) benchmark::DoNotOptimize(validate_record(doc));
}
BENCHMARK(BM_ValidateRecord)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
