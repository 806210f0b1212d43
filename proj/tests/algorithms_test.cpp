// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "rmms/oracle.hpp"
#include "rmms/rmms.hpp"
#include "test_util.hpp"

namespace rmms {
namespace {

using testing::full;
using testing::same;
using testing::value_of;

// A random partial start: every item goes to the pool or to a random agent.
PartialAllocation random_start(const Instance& inst, SplitMix64& rng) {
  std::vector<Bundle> bundles(static_cast<std::size_t>(inst.agents()));
  Bundle pool;
  for (int e = 0; e < inst.items(); ++e) {
    const auto label = rng.below(static_cast<std::uint64_t>(inst.agents()));
    if (label == 0) {
      pool = pool.with(e);
    } else {
      auto& b = bundles[label - 1];
      b = b.with(e);
    }
  }
  return PartialAllocation(inst.items(), pool, std::move(bundles));
}

TEST(EnvyCycle, SymmetricStart) {
  const Instance inst = same({1, 1}, 2);
  const auto start = PartialAllocation::empty(2, 2);
  QueryLedger q;
  const auto run = envy_cycle_run(inst, start, q);
  EXPECT_TRUE(run.allocation.is_full());
  EXPECT_EQ(run.allocation.bundle(0).size(), 1);
  EXPECT_EQ(run.allocation.bundle(1).size(), 1);
  EXPECT_TRUE(is_ef1(inst, run.allocation).holds);
  EXPECT_TRUE(certify_envy_cycle(inst, start, run).ok());
  EXPECT_EQ(q.value_queries, 0u);
}

TEST(EnvyCycle, FullStartIsUnchanged) {
  const Instance inst = same({1, 2, 3}, 2);
  const auto start = full(3, {Bundle::of({0, 2}), Bundle::single(1)});
  QueryLedger q;
  const auto run = envy_cycle_run(inst, start, q);
  EXPECT_EQ(run.allocation, start);
  EXPECT_EQ(run.trace.matching, (std::vector<int>{0, 1}));
  EXPECT_TRUE(run.trace.rounds.empty());
}

TEST(EnvyCycle, OneItemEachFromUnevenStart) {
  const Instance inst = same({1, 1}, 2);
  const PartialAllocation start(2, Bundle::single(1), {Bundle::single(0), Bundle{}});
  QueryLedger q;
  const auto run = envy_cycle_run(inst, start, q);
  EXPECT_EQ(run.allocation.bundle(0).size(), 1);
  EXPECT_EQ(run.allocation.bundle(1).size(), 1);
  EXPECT_TRUE(certify_envy_cycle(inst, start, run).ok());
}

TEST(EnvyCycle, CertificateHoldsOnRandomStarts) {
  SplitMix64 rng(2024);
  for (auto kind : {ValuationKind::additive, ValuationKind::capped_additive, ValuationKind::table}) {
    for (const auto& inst : random_corpus({100, kind, 1, 4, 1, 8, 6, rng.next()})) {
      const auto start = random_start(inst, rng);
      QueryLedger q;
      const auto run = envy_cycle_run(inst, start, q);
      ASSERT_TRUE(run.allocation.is_full());
      const auto cert = certify_envy_cycle(inst, start, run);
      ASSERT_TRUE(cert.ok()) << cert.detail;
      ASSERT_EQ(q.value_queries, 0u);
      ASSERT_EQ(run.trace.ledger, q);
    }
  }
}

TEST(EnvyCycle, CertificateCatchesTampering) {
  const Instance inst = same({1, 1, 1}, 2);
  const auto start = PartialAllocation::empty(3, 2);
  QueryLedger q;
  auto run = envy_cycle_run(inst, start, q);
  run.trace.matching = {0, 0};
  EXPECT_FALSE(certify_envy_cycle(inst, start, run).ok());
}

TEST(Preprocess, Examples) {
  const Instance idle = same({1, 1}, 2);
  const auto done = full(2, {Bundle::single(0), Bundle::single(1)});
  EXPECT_EQ(preprocess_singletons(idle, done), done);

  const Instance poor = same({0, 3}, 2);
  const PartialAllocation start(2, Bundle::single(1), {Bundle::single(0), Bundle{}});
  const auto after = preprocess_singletons(poor, start);
  EXPECT_EQ(after.bundle(0), Bundle::single(1));
  EXPECT_EQ(after.pool(), Bundle::single(0));

  const Instance one(2, {testing::add({1, 5})});
  const PartialAllocation single(2, Bundle::single(1), {Bundle::single(0)});
  QueryLedger q;
  const auto swapped = preprocess_singletons(one, single, q);
  EXPECT_EQ(swapped.bundle(0), Bundle::single(1));
  EXPECT_EQ(swapped.pool(), Bundle::single(0));
  EXPECT_EQ(q.value_queries, 0u);
  EXPECT_EQ(q.comparison_queries, 2u);
}

TEST(Preprocess, NobodyPrefersAPoolItemAfterwards) {
  SplitMix64 rng(8);
  for (const auto& inst : random_corpus({200, ValuationKind::table, 1, 4, 1, 7, 6, 31})) {
    const auto out = preprocess_singletons(inst, random_start(inst, rng));
    for (int i = 0; i < inst.agents(); ++i) {
      for (int e : out.pool().items()) {
        ASSERT_GE(value_of(inst, out, i), testing::value(inst.valuation(i), Bundle::single(e)));
      }
    }
  }
}

TEST(EflComplete, Examples) {
  const Instance threes = same({1, 1, 1}, 2);
  const PartialAllocation p(3, Bundle::single(2), {Bundle::single(0), Bundle::single(1)});
  const auto run = efl_complete(threes, p);
  EXPECT_TRUE(run.allocation.is_full());
  EXPECT_TRUE(is_efl(threes, run.allocation).holds);
  for (int i = 0; i < 2; ++i) EXPECT_GE(value_of(threes, run.allocation, i), 1);

  const Instance skew = same({1, 3}, 2);
  const PartialAllocation q(2, Bundle::single(1), {Bundle::single(0), Bundle{}});
  const auto run2 = efl_complete(skew, q);
  // Agent 0 moves first: swaps {0} for {1}; agent 1 then takes the returned {0}.
  EXPECT_EQ(run2.allocation.bundle(0), Bundle::single(1));
  EXPECT_EQ(run2.allocation.bundle(1), Bundle::single(0));
  EXPECT_TRUE(is_efl(skew, run2.allocation).holds);

  const auto done = full(3, {Bundle::of({0, 1}), Bundle::single(2)});
  EXPECT_EQ(efl_complete(threes, done).allocation, done);
}

TEST(EflComplete, RejectsNonEflStart) {
  const Instance inst = same({1, 4, 4}, 2);
  EXPECT_THROW(efl_complete(inst, full(3, {Bundle::single(0), Bundle::of({1, 2})})),
               PreconditionError);
}

TEST(EflComplete, KeepsEflAndValuesFromEflStarts) {
  SplitMix64 rng(77);
  int tried = 0;
  for (const auto& inst : random_corpus({600, ValuationKind::additive, 2, 4, 1, 7, 4, 5})) {
    const auto start = random_start(inst, rng);
    if (!is_efl(inst, start).holds) continue;
    ++tried;
    QueryLedger q;
    const auto run = efl_complete(inst, start, q);
    ASSERT_TRUE(run.allocation.is_full());
    ASSERT_TRUE(is_efl(inst, run.allocation).holds);
    ASSERT_EQ(q.value_queries, 0u);
    for (int i = 0; i < inst.agents(); ++i) {
      ASSERT_GE(value_of(inst, run.allocation, i), value_of(inst, start, i));
    }
  }
  EXPECT_GT(tried, 50);
}

TEST(RmmsEfx, SingleAgentTakesEverything) {
  const Instance inst = same({4, 2, 7}, 1);
  QueryLedger q;
  const auto run = rmms_efx_partial(inst, q);
  EXPECT_EQ(value_of(inst, run.allocation, 0), 13);
}

TEST(RmmsEfx, TwoSymmetricItems) {
  const Instance inst = same({1, 1}, 2);
  QueryLedger q;
  const auto run = rmms_efx_partial(inst, q);
  EXPECT_TRUE(is_efx(inst, run.allocation).holds);
  EXPECT_EQ(value_of(inst, run.allocation, 0), 1);
  EXPECT_EQ(value_of(inst, run.allocation, 1), 1);
}

TEST(RmmsEfx, ZeroShareAgents) {
  const Instance inst = same({1, 0, 0}, 3);
  QueryLedger q;
  const auto shares = rmms_values(inst, q);
  EXPECT_EQ(shares, (std::vector<Value>{0, 0, 0}));
  const auto run = rmms_efx_partial(inst, shares, q);
  EXPECT_TRUE(is_efx(inst, run.allocation).holds);
  const auto all = rmms_efl_full(inst);
  EXPECT_TRUE(all.allocation().is_full());
  EXPECT_TRUE(is_efl(inst, all.allocation()).holds);
}

TEST(RmmsEfx, OneItemPerAgentWhenMEqualsN) {
  const Instance inst(3, {testing::add({3, 1, 2}), testing::add({1, 3, 2}), testing::add({2, 1, 3})});
  const auto run = rmms_efl_full(inst);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(run.allocation().bundle(i).size(), 1);
}

TEST(RmmsEfl, Examples) {
  for (const auto& inst : {same({3, 1, 1, 1}, 2), same({1, 1, 1, 1, 1, 1}, 3)}) {
    const auto run = rmms_efl_full(inst);
    EXPECT_TRUE(run.allocation().is_full());
    EXPECT_TRUE(is_efl(inst, run.allocation()).holds);
    for (int i = 0; i < inst.agents(); ++i) {
      EXPECT_GE(value_of(inst, run.allocation(), i), run.shares[static_cast<std::size_t>(i)]);
    }
  }
  EXPECT_EQ(rmms_efl_full(same({1, 1, 1, 1, 1, 1}, 3)).shares, (std::vector<Value>{2, 2, 2}));
}

void check_guarantees(const Instance& inst) {
  QueryLedger q;
  const auto run = rmms_efl_full(inst, q);
  const auto& partial = run.partial.allocation;
  ASSERT_TRUE(is_efx(inst, partial).holds);
  ASSERT_TRUE(efx_minimality_holds(inst, run.shares, run.partial.trace));
  ASSERT_TRUE(run.allocation().is_full());
  ASSERT_TRUE(is_efl(inst, run.allocation()).holds);
  ASSERT_EQ(run.completion.trace.ledger.value_queries, 0u);
  for (int i = 0; i < inst.agents(); ++i) {
    const Value share = run.shares[static_cast<std::size_t>(i)];
    ASSERT_GE(value_of(inst, partial, i), share);
    ASSERT_GE(value_of(inst, run.allocation(), i), value_of(inst, partial, i));
  }
}

TEST(RmmsEfl, GuaranteesOnRandomInstances) {
  for (auto kind : {ValuationKind::additive, ValuationKind::capped_additive, ValuationKind::table}) {
    for (const auto& inst : random_corpus({150, kind, 1, 4, 1, 8, 5, 404})) {
      check_guarantees(inst);
    }
  }
}

TEST(RmmsEfl, GuaranteesWithManyZeroValues) {
  GenParams p{3, 6, ValuationKind::additive, 1, std::nullopt};
  for (const auto& inst : generate_instances(p, 12, 200)) check_guarantees(inst);
}

TEST(BipartiteMatcher, FindsPerfectMatching) {
  // agent 0 likes parts 0,1; agent 1 likes part 0 only.
  const detail::BipartiteMatcher m({{1, 1}, {1, 0}});
  EXPECT_TRUE(m.perfect());
  EXPECT_EQ(m.part_of(0), 1);
  EXPECT_EQ(m.part_of(1), 0);
}

}  // namespace
}  // namespace rmms
