// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <optional>

#include "fixtures.hpp"
#include "grtc/error.hpp"
#include "grtc/operators.hpp"

namespace grtc {
namespace {

using testing::fig1;
using testing::member_names;
using testing::ring_ids;
using testing::sized;
using testing::sizes;
using Names = std::vector<std::string>;

OperatorPolicy policy_d(std::size_t d) { return OperatorPolicy{d, 2, OperatorPolicy::kUnlimited}; }

template <class E>
const E& only_entry_of(const ChangeLog& log) {
  const E* found = nullptr;
  for (const auto& e : log.entries)
    if (const auto* p = std::get_if<E>(&e)) {
      EXPECT_EQ(found, nullptr) << "more than one entry of this kind";
      found = p;
    }
  if (!found) throw std::runtime_error("entry kind missing from log");
  return *found;
}

void expect_error(ErrorCode code, const std::function<void()>& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

// Insert

TEST(Insert, ConcentratedOverflowSplitsOnce) {
  const RotationState s = sized({4, 2, 2});
  Rng rng(1);
  const auto r = insert_worker(s, policy_d(2), {ChooseKind::Concentrated, FindOrder::PredFirst}, rng, {"w9", 9});
  EXPECT_EQ(r.log.count_splits(), 1u);
  const auto& split = only_entry_of<change::Split>(r.log);
  EXPECT_EQ(split.group, "A");
  // 5 > max(d) = 4: A keeps its three oldest, the two newest leave.
  EXPECT_EQ(member_names(r.state, "A"), (Names{"w1", "w2", "w3"}));
  EXPECT_EQ(testing::names(split.moved), (Names{"w4", "w9"}));
  // A is current at index 0, so the new group closes the ring right before it.
  EXPECT_EQ(ring_ids(r.state).back(), split.new_group);
  EXPECT_TRUE(validate_pair(s, advance_current(r.state)).ok());
}

TEST(Insert, BelowThresholdJustInserts) {
  const RotationState s = sized({3, 2, 2});
  Rng rng(1);
  const auto r = insert_worker(s, policy_d(2), {ChooseKind::Balanced, FindOrder::PredFirst}, rng, {"w9", 9});
  ASSERT_EQ(r.log.entries.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<change::Inserted>(r.log.entries[0]));
  EXPECT_EQ(ring_ids(r.state), ring_ids(s));
}

TEST(Insert, Fig1BalancedKeepsCounters) {
  const RotationState s = fig1();
  Rng rng(1);
  const auto r = insert_worker(s, policy_d(2), {ChooseKind::Balanced, FindOrder::PredFirst}, rng, {"w10", 9});
  EXPECT_EQ(*r.state.find_worker("w10"), r.state.index_of("g2"));
  for (const auto& w : s.workers()) EXPECT_EQ(r.state.counter_of_worker(w.id), s.counter_of_worker(w.id));
}

TEST(Insert, DuplicateWorker) {
  Rng rng(1);
  expect_error(ErrorCode::DuplicateWorker, [&] { insert_worker(fig1(), policy_d(2), {}, rng, {"w1", 0}); });
}

TEST(Insert, ShortGroupIsRefilledFirst) {
  const RotationState s = sized({3, 1, 4});
  Rng rng(1);
  const auto r = insert_worker(s, policy_d(2), {ChooseKind::Concentrated, FindOrder::PredFirst}, rng, {"w9", 9});
  EXPECT_EQ(sizes(r.state), (std::vector<std::size_t>{3, 2, 4}));
}

// Remove

TEST(Remove, NearestDonorRefills) {
  const RotationState s = sized({2, 3, 2});  // A = w1,w2; B = w3,w4,w5; C = w6,w7
  const auto r = remove_worker(s, policy_d(2), {}, "w7");
  const auto& d = only_entry_of<change::Donated>(r.log);
  EXPECT_EQ(d.from, "B");
  EXPECT_EQ(d.to, "C");
  EXPECT_EQ(d.worker.id, "w5");  // newest member of B
  EXPECT_EQ(sizes(r.state), (std::vector<std::size_t>{2, 2, 2}));
  EXPECT_EQ(r.state.group_count(), 3u);
  EXPECT_TRUE(validate_groups(r.state.ring(), r.state.current()).ok());
  EXPECT_TRUE(validate_pair(s, advance_current(r.state)).ok());
}

TEST(Remove, NoDonorJoins) {
  const RotationState s = sized({2, 2, 2});
  const auto r = remove_worker(s, policy_d(2), {}, "w6");
  const auto& j = only_entry_of<change::Joined>(r.log);
  // Succ(C) = A is current, so A absorbs C.
  EXPECT_EQ(j.survivor, "A");
  EXPECT_EQ(j.absorbed, "C");
  EXPECT_EQ(ring_ids(r.state), (std::vector<GroupId>{"A", "B"}));
  EXPECT_EQ(r.state.group("A").members.size(), 3u);
  EXPECT_TRUE(validate_pair(s, advance_current(r.state)).ok());
}

TEST(Remove, LastButOneWorkerStalls) {
  const RotationState s = sized({1, 1});
  EXPECT_THROW(remove_worker(s, policy_d(2), {}, "w1"), StallError);
}

TEST(Remove, UnknownWorker) {
  expect_error(ErrorCode::UnknownWorker, [] { remove_worker(fig1(), policy_d(2), {}, "w99"); });
}

TEST(Remove, TwoGroupsBelowTwoDEntersDegraded) {
  const RotationState s = sized({2, 2});
  const auto r = remove_worker(s, policy_d(2), {}, "w4");
  EXPECT_EQ(only_entry_of<change::DegradedEntered>(r.log).group, "B");
  EXPECT_EQ(sizes(r.state), (std::vector<std::size_t>{2, 1}));
}

TEST(Remove, DonorBeyondHorizonFallsBackToJoin) {
  // B short; the only donor E is three hops away.
  const RotationState s = sized({2, 2, 2, 2, 3, 2}, 3);  // current D
  OperatorPolicy p{2, 2, 1};
  const auto r = remove_worker(s, p, {}, "w3");
  // Join rule applies first: B absorbs C (legal, nobody from D moves).
  EXPECT_EQ(only_entry_of<change::Joined>(r.log).survivor, "B");
}

// Split

TEST(Split, NonCurrentKeepsOldestHalf) {
  const RotationState s = testing::make_state({{"A", {"x"}}, {"G", {"a", "b", "c", "d", "e"}}, {"C", {"y"}}}, "A");
  const auto r = split_group(s, policy_d(2), "G");
  EXPECT_EQ(member_names(r.state, "G"), (Names{"a", "b", "c"}));
  const auto& split = only_entry_of<change::Split>(r.log);
  EXPECT_EQ(r.state.successor("G"), split.new_group);
  EXPECT_EQ(member_names(r.state, split.new_group), (Names{"d", "e"}));
}

TEST(Split, CurrentPlacesNewGroupBeforeCurrent) {
  const RotationState s = testing::make_state({{"A", {"a", "b", "c", "d", "e"}}, {"B", {"x", "z"}}, {"C", {"y", "v"}}}, "A");
  const auto r = split_group(s, policy_d(2), "A");
  const auto& split = only_entry_of<change::Split>(r.log);
  EXPECT_EQ(ring_ids(r.state), (std::vector<GroupId>{"A", "B", "C", split.new_group}));
  EXPECT_EQ(r.state.predecessor("A"), split.new_group);
  EXPECT_TRUE(validate_pair(s, advance_current(r.state)).ok());
}

TEST(Split, CurrentInMiddleOfRing) {
  const RotationState s = testing::make_state({{"A", {"x"}}, {"B", {"a", "b", "c", "d", "e"}}, {"C", {"y"}}}, "B");
  const auto r = split_group(s, policy_d(2), "B");
  const auto& split = only_entry_of<change::Split>(r.log);
  EXPECT_EQ(ring_ids(r.state), (std::vector<GroupId>{"A", split.new_group, "B", "C"}));
  EXPECT_EQ(r.state.current(), "B");
}

TEST(Split, ExactlyMaxIsBelowThreshold) {
  expect_error(ErrorCode::BelowThreshold, [] { split_group(sized({4, 2}), policy_d(2), "A"); });
}

TEST(Split, FreshIdsAreNeverReused) {
  const RotationState s = testing::make_state({{"g1", {"a", "b", "c", "d", "e"}}, {"g5", {"x", "y"}}}, "g1");
  const auto r1 = split_group(s, policy_d(2), "g1");
  EXPECT_EQ(only_entry_of<change::Split>(r1.log).new_group, "g6");
  const auto r2 = join_groups(r1.state, policy_d(2), "g5");
  EXPECT_EQ(only_entry_of<change::Joined>(r2.log).absorbed, "g6");
  Rng rng(1);
  const auto r3 =
      insert_worker(r2.state, policy_d(2), {ChooseKind::Concentrated, FindOrder::PredFirst}, rng, {"f", 10});
  EXPECT_EQ(only_entry_of<change::Split>(r3.log).new_group, "g7");
}

// Join

TEST(Join, DeficientAbsorbsSuccessor) {
  const auto r = join_groups(sized({2, 1, 2, 2}), policy_d(2), "B");
  EXPECT_EQ(ring_ids(r.state), (std::vector<GroupId>{"A", "B", "D"}));
  EXPECT_EQ(only_entry_of<change::Joined>(r.log).absorbed, "C");
}

TEST(Join, CurrentAbsorbsDeficientPredecessor) {
  const RotationState s = sized({2, 2, 2, 1});
  const auto r = join_groups(s, policy_d(2), "D");
  EXPECT_EQ(ring_ids(r.state), (std::vector<GroupId>{"A", "B", "C"}));
  EXPECT_EQ(only_entry_of<change::Joined>(r.log).survivor, "A");
  EXPECT_TRUE(r.state.find_group(s.current()).has_value());
}

TEST(Join, DeficientCurrentAbsorbsPredecessor) {
  const auto r = join_groups(sized({1, 2, 2, 2}), policy_d(2), "A");
  EXPECT_EQ(ring_ids(r.state), (std::vector<GroupId>{"A", "B", "C"}));
  EXPECT_EQ(only_entry_of<change::Joined>(r.log).absorbed, "D");
}

TEST(Join, TwoGroupsIsTooFew) {
  expect_error(ErrorCode::TooFewGroups, [] { join_groups(sized({2, 1}), policy_d(2), "B"); });
}

// Donate

TEST(Donate, NewestMemberMoves) {
  const RotationState s = sized({2, 3, 1});
  const auto r = donate_worker(s, policy_d(2), "B", "C");
  EXPECT_EQ(member_names(r.state, "B"), (Names{"w3", "w4"}));
  EXPECT_EQ(member_names(r.state, "C"), (Names{"w6", "w5"}));
}

TEST(Donate, CurrentIntoSuccessorForbidden) {
  expect_error(ErrorCode::ForbiddenMove, [] { donate_worker(sized({3, 1, 2}), policy_d(2), "A", "B"); });
}

TEST(Donate, DonorAtDIsTooSmall) {
  expect_error(ErrorCode::DonorTooSmall, [] { donate_worker(sized({2, 2, 1}), policy_d(2), "B", "C"); });
}

// Replay

TEST(Replay, ReproducesEveryOperator) {
  const RotationState s = sized({4, 2, 2, 3});
  Rng rng(3);
  std::vector<OperatorResult> results;
  results.push_back(insert_worker(s, policy_d(2), {ChooseKind::Concentrated, FindOrder::PredFirst}, rng, {"x", 50}));
  results.push_back(remove_worker(s, policy_d(2), {}, "w5"));
  results.push_back(remove_worker(s, policy_d(2), {}, "w11"));
  results.push_back(join_groups(s, policy_d(2), "C"));
  results.push_back(donate_worker(s, policy_d(2), "D", "C"));
  for (const auto& r : results) EXPECT_EQ(apply_change_log(s, r.log), r.state);
}

TEST(Replay, RejectsForeignLog) {
  ChangeLog log;
  log.entries.push_back(change::Removed{{"nobody", 0}, "A"});
  expect_error(ErrorCode::CorruptRecord, [&] { apply_change_log(sized({2, 2}), log); });
}

// Properties

struct Walk {
  RotationState state;
  std::size_t next_id;
};

// Random single-event transitions from random states; checks the operator
// invariants on every step.
class OperatorProperties : public ::testing::TestWithParam<std::tuple<std::size_t, ChooseKind>> {};

TEST_P(OperatorProperties, RandomWalkKeepsInvariants) {
  const auto [d, choose] = GetParam();
  const OperatorPolicy policy{d, 2, OperatorPolicy::kUnlimited};
  const StrategySet strategies{choose, FindOrder::PredFirst};
  Rng rng(17 * d + static_cast<std::size_t>(choose));
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 2 + rng.index(5);
    RotationState s = testing::random_state(rng, m * d + rng.index(6), m);
    std::size_t next_id = 1000;
    for (int step = 0; step < 60; ++step) {
      const bool add = s.worker_count() < 3 || rng.uniform() < 0.5;
      OperatorResult r = [&] {
        if (add) return insert_worker(s, policy, strategies, rng, {"n" + std::to_string(next_id), next_id++});
        const auto all = s.workers();
        try {
          return remove_worker(s, policy, strategies, all[rng.index(all.size())].id);
        } catch (const StallError&) {
          return OperatorResult{s, {}};
        }
      }();
      ASSERT_TRUE(validate_groups(r.state.ring(), r.state.current()).ok());
      ASSERT_TRUE(validate_pair(s, advance_current(r.state)).ok());
      ASSERT_EQ(apply_change_log(s, r.log), r.state);
      std::size_t largest = 0;
      for (const auto& g : s.ring()) largest = std::max(largest, g.members.size());
      if (add && largest <= policy.max_size()) {
        const auto home = r.state.find_worker("n" + std::to_string(next_id - 1));
        ASSERT_TRUE(home.has_value());
        // Joins may leave a group above max(d); from a state without one, an
        // insert never creates one.
        ASSERT_LE(r.state.ring()[*home].members.size(), policy.max_size());
      }
      s = advance_current(r.state);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(
    Grid, OperatorProperties,
    ::testing::Combine(::testing::Values(std::size_t{1}, std::size_t{2}, std::size_t{3}),
                       ::testing::Values(ChooseKind::Random, ChooseKind::Farthest, ChooseKind::Concentrated,
                                         ChooseKind::Balanced, ChooseKind::Hybrid)));

TEST(OperatorRoundTrip, InsertThenRemoveRestoresMembership) {
  Rng rng(5);
  const OperatorPolicy policy = policy_d(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + rng.index(5);
    const RotationState s = testing::random_state(rng, 2 * m + rng.index(8), m);
    const auto in = insert_worker(s, policy, {ChooseKind::Random, FindOrder::PredFirst}, rng, {"new", 999});
    if (in.log.has_restructuring()) continue;
    const auto out = remove_worker(in.state, policy, {}, "new");
    if (out.log.has_restructuring()) continue;
    for (const auto& g : s.ring()) EXPECT_EQ(out.state.group(g.id).members, g.members);
  }
}

TEST(OperatorFloor, RemoveKeepsFloorWhenFeasibleFromFloorState) {
  // From states where every group already meets d, a single departure leaves
  // every group at >= d whenever n >= 2d afterwards, unless the only spare
  // workers sit in the current group and the short group is its successor.
  Rng rng(11);
  std::size_t checked = 0, guarded = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t d = 1 + rng.index(3);
    const std::size_t m = 2 + rng.index(4);
    RotationState s = testing::random_state(rng, m * d + rng.index(2 * d + 2), m);
    if (!check_floor(s, d).notices.empty()) continue;
    const auto all = s.workers();
    const auto victim = all[rng.index(all.size())].id;
    const GroupId home = s.ring()[*s.find_worker(victim)].id;
    if (s.worker_count() - 1 < 2 * d) continue;
    ++checked;
    std::optional<OperatorResult> r;
    try {
      r = remove_worker(s, policy_d(d), {}, victim);
    } catch (const StallError&) {
      // d = 1, two groups: the successor emptied and only the current group could refill it.
      EXPECT_EQ(d, 1u);
      EXPECT_EQ(home, s.successor(s.current()));
      continue;
    }
    if (!check_floor(r->state, d).notices.empty()) {
      ++guarded;
      EXPECT_EQ(home, s.successor(s.current()));
    }
  }
  EXPECT_GT(checked, 500u);
  (void)guarded;
}

}  // namespace
}  // namespace grtc
