// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "grtc/error.hpp"
#include "grtc/generator.hpp"
#include "grtc/serialization.hpp"

namespace grtc {
namespace {

using testing::arrive;
using testing::depart;
using testing::fig1;

const OperatorPolicy kD2{2, 2, OperatorPolicy::kUnlimited};

TEST(PartitionEvents, HalfOpenWindow) {
  const std::vector<WorkerEvent> events{arrive(0.5, "a", 0), arrive(1.0, "b", 1), arrive(1.5, "c", 2)};
  const auto w = partition_events(events, 0.5, 1.5);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w[0].worker.id, "b");
  EXPECT_EQ(w[1].worker.id, "c");
  EXPECT_TRUE(partition_events(events, 2.0, 3.0).empty());
  EXPECT_TRUE(partition_events(events, 1.5, 1.5).empty());
}

TEST(PartitionEvents, KeepsFileOrderForTies) {
  const std::vector<WorkerEvent> events{arrive(1.0, "z", 0), arrive(1.0, "a", 1), depart(1.0, "z")};
  const auto w = partition_events(events, 0.0, 1.0);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[0].worker.id, "z");
  EXPECT_EQ(w[2].op, EventOp::Depart);
}

TEST(NextState, EmptyBatchIsPureAdvance) {
  Rng rng(1);
  const auto r = next_state(fig1(), kD2, {}, rng, {});
  EXPECT_TRUE(r.log.empty());
  EXPECT_EQ(r.state, advance_current(fig1()));
}

TEST(NextState, Fig1ArrivalGoesToSmallestGroup) {
  Rng rng(1);
  const std::vector<WorkerEvent> batch{arrive(1.0, "w10", 9)};
  const auto r = next_state(fig1(), kD2, {ChooseKind::Balanced, FindOrder::PredFirst}, rng, batch);
  EXPECT_EQ(r.state.ring()[*r.state.find_worker("w10")].id, "g2");
  EXPECT_EQ(r.state.current(), "g2");
  EXPECT_TRUE(validate_pair(fig1(), r.state).ok());
}

TEST(NextState, DoubleDepartureStaysValid) {
  Rng rng(1);
  for (const auto& batch : {std::vector<WorkerEvent>{depart(1, "w6"), depart(1, "w7")},
                            std::vector<WorkerEvent>{depart(1, "w4"), depart(1, "w5")}}) {
    const auto r = next_state(fig1(), kD2, {}, rng, batch);
    EXPECT_TRUE(validate_groups(r.state.ring(), r.state.current()).ok());
    EXPECT_TRUE(validate_pair(fig1(), r.state).ok());
    EXPECT_TRUE(check_floor(r.state, 2).notices.empty());
    EXPECT_EQ(advance_current(apply_change_log(fig1(), r.log)), r.state);
  }
}

TEST(NextState, InconsistentEvents) {
  Rng rng(1);
  const std::vector<WorkerEvent> again{arrive(1, "w1", 0)};
  const std::vector<WorkerEvent> ghost{depart(1, "nobody")};
  for (const auto& batch : {again, ghost}) {
    try {
      next_state(fig1(), kD2, {}, rng, batch);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InconsistentEvent);
    }
  }
}

TEST(NextState, ReplayPlusAdvanceReproducesOutput) {
  Rng rng(2);
  const std::vector<WorkerEvent> batch{depart(1, "w4"), arrive(1, "x", 20), depart(1, "w1"), depart(1, "w9")};
  const auto r = next_state(fig1(), kD2, {}, rng, batch);
  EXPECT_EQ(advance_current(apply_change_log(fig1(), r.log)), r.state);
}

TEST(InitialState, RoundRobinDealing) {
  std::vector<WorkerId> ws;
  for (std::size_t i = 0; i < 9; ++i) ws.push_back({"w" + std::to_string(i + 1), i});
  const RotationState s = build_initial_state(ws, kD2);
  EXPECT_EQ(testing::sizes(s), (std::vector<std::size_t>{3, 2, 2, 2}));
  EXPECT_EQ(testing::member_names(s, "g1"), (std::vector<std::string>{"w1", "w5", "w9"}));
  EXPECT_EQ(s.current(), "g1");
}

TEST(InitialState, TwoWorkersDegraded) {
  const std::vector<WorkerId> ws{{"a", 0}, {"b", 1}};
  const RotationState s = build_initial_state(ws, kD2);
  EXPECT_EQ(testing::sizes(s), (std::vector<std::size_t>{1, 1}));
  EXPECT_FALSE(check_floor(s, 2).notices.empty());
  EXPECT_TRUE(check_floor(s, 2).ok());
}

TEST(InitialState, OneWorkerStalls) {
  const std::vector<WorkerId> ws{{"a", 0}};
  EXPECT_THROW(build_initial_state(ws, kD2), StallError);
}

TEST(Schedule, Validation) {
  EXPECT_THROW(TaskSchedule::explicit_times({}), Error);
  EXPECT_THROW(TaskSchedule::explicit_times({1.0, 1.0}), Error);
  EXPECT_THROW(TaskSchedule::periodic(0, 0, 3), Error);
  EXPECT_EQ(TaskSchedule::periodic(1, 2, 3).times(), (std::vector<double>{1, 3, 5}));
}

TEST(RunRotation, NoEventsCyclesCurrent) {
  const RunRecord rec = run_rotation(fig1(), kD2, {}, TaskSchedule::periodic(1, 1, 3), {}, 1);
  ASSERT_EQ(rec.states.size(), 4u);
  EXPECT_EQ(rec.states[1].current(), "g2");
  EXPECT_EQ(rec.states[2].current(), "g3");
  EXPECT_EQ(rec.states[3].current(), "g1");
  EXPECT_EQ(rec.states[3].step(), 3u);
  for (const auto& log : rec.change_logs) EXPECT_TRUE(log.empty());
}

TEST(RunRotation, DeterministicUnderSameSeed) {
  const std::vector<WorkerEvent> events{depart(2.5, "w5"), arrive(3.2, "x", 10)};
  const auto schedule = TaskSchedule::periodic(1, 1, 6);
  const StrategySet random{ChooseKind::Random, FindOrder::PredFirst};
  const RunRecord a = run_rotation(fig1(), kD2, random, schedule, events, 42);
  const RunRecord b = run_rotation(fig1(), kD2, random, schedule, events, 42);
  EXPECT_EQ(a, b);
  EXPECT_EQ(to_text(record_to_json(a)), to_text(record_to_json(b)));
}

TEST(RunRotation, SeedOnlyAffectsRandomStrategy) {
  std::vector<WorkerEvent> events;
  for (int i = 0; i < 30; ++i) events.push_back(arrive(0.5 + i, "x" + std::to_string(i), 10 + i));
  const auto schedule = TaskSchedule::periodic(1, 1, 35);
  for (auto kind : {ChooseKind::Farthest, ChooseKind::Concentrated, ChooseKind::Balanced, ChooseKind::Hybrid}) {
    const StrategySet st{kind, FindOrder::PredFirst};
    EXPECT_EQ(run_rotation(fig1(), kD2, st, schedule, events, 1), run_rotation(fig1(), kD2, st, schedule, events, 2));
  }
  const StrategySet random{ChooseKind::Random, FindOrder::PredFirst};
  EXPECT_NE(run_rotation(fig1(), kD2, random, schedule, events, 1).states,
            run_rotation(fig1(), kD2, random, schedule, events, 2).states);
}

TEST(RunRotation, StallAndResume) {
  const RotationState init = testing::make_state({{"g1", {"a"}}, {"g2", {"b"}}}, "g1");
  const std::vector<WorkerEvent> events{depart(1.5, "a", 0), arrive(3.5, "c", 2)};
  const RunRecord rec = run_rotation(init, kD2, {}, TaskSchedule::periodic(1, 1, 5), events, 1);
  ASSERT_EQ(rec.stalls.size(), 1u);
  const StallInterval& st = rec.stalls[0];
  EXPECT_DOUBLE_EQ(st.start, 2.0);
  ASSERT_TRUE(st.end.has_value());
  EXPECT_DOUBLE_EQ(*st.end, 4.0);
  EXPECT_DOUBLE_EQ(st.duration, 2.0);
  // Frozen at t=2 and t=3; resumed at t=4.
  EXPECT_EQ(rec.states.size(), 4u);
  EXPECT_EQ(st.resume_state, 2u);
  EXPECT_EQ(rec.times, (std::vector<double>{1.0, 4.0, 5.0}));
  EXPECT_EQ(rec.states[st.resume_state].worker_count(), 2u);
  EXPECT_EQ(rec.states.back().step(), 5u);
  EXPECT_EQ(rec.change_logs.size() + 1, rec.states.size());
}

TEST(RunRotation, UnresolvedStallIsOpen) {
  const RotationState init = testing::make_state({{"g1", {"a"}}, {"g2", {"b"}}}, "g1");
  const std::vector<WorkerEvent> events{depart(1.5, "a", 0)};
  const RunRecord rec = run_rotation(init, kD2, {}, TaskSchedule::periodic(1, 1, 4), events, 1);
  ASSERT_EQ(rec.stalls.size(), 1u);
  EXPECT_FALSE(rec.stalls[0].end.has_value());
  EXPECT_DOUBLE_EQ(rec.stalls[0].duration, 2.0);
  EXPECT_EQ(rec.states.size(), 2u);
}

TEST(RunRotation, UnconsumedEventsCounted) {
  const std::vector<WorkerEvent> events{arrive(0.5, "x", 10), arrive(9.0, "y", 11), depart(9.5, "w1")};
  const RunRecord rec = run_rotation(fig1(), kD2, {}, TaskSchedule::periodic(1, 1, 3), events, 1);
  EXPECT_EQ(rec.unconsumed_events, 2u);
}

TEST(RunRotation, EveryEventLandsInExactlyOneLog) {
  TraceConfig tc;
  tc.seed = 5;
  tc.duration = 300;
  tc.arrival_rate = 0.3;
  tc.departure_rate = 0.03;
  tc.initial_workers = 10;
  const Trace trace = generate_trace(tc);
  const RunRecord rec = run_rotation(build_initial_state(trace.initial, kD2), kD2, {},
                                     TaskSchedule::periodic(1, 1, 300), trace.events, 5);
  std::size_t logged = 0;
  for (const auto& log : rec.change_logs)
    for (const auto& e : log.entries)
      logged += std::holds_alternative<change::Inserted>(e) || std::holds_alternative<change::Removed>(e);
  EXPECT_EQ(logged + rec.unconsumed_events, trace.events.size());
  for (std::size_t k = 0; k + 1 < rec.states.size(); ++k) {
    if (rec.is_reseed(k)) continue;
    EXPECT_TRUE(validate_pair(rec.states[k], rec.states[k + 1]).ok()) << k;
  }
}

}  // namespace
}  // namespace grtc
