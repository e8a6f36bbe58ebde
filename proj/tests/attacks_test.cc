// Copyright 2026 The LeakLab Authors
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

#include "leaklab/attacks.h"

#include <gtest/gtest.h>

#include "leaklab/errors.h"
#include "test_oracles.h"

namespace leaklab {
namespace {

LeakageMode Mode(LeakScope s, LeakPayload p) { return {s, p}; }
constexpr auto kBelow = LeakScope::kBelowOnly;
constexpr auto kBoth = LeakScope::kAlways;

std::uint64_t Bound(Theorem t, const SpaceParams& p) {
  return QueryBound(t, p)->convert_to<std::uint64_t>();
}

TEST(AttackRegistryTest, NamesRoundTrip) {
  for (AttackId id : AllAttacks()) EXPECT_EQ(ParseAttack(AttackName(id)), id);
  EXPECT_EQ(ParseAttack("both-positions"), AttackId::kBothPositions);
  EXPECT_THROW(ParseAttack("nope"), UsageError);
  EXPECT_TRUE(IsPassive(AttackId::kAccumulation));
  EXPECT_FALSE(IsPassive(AttackId::kBelowDistance));
}

TEST(BothPositionsValuesTest, OneQuery) {
  Oracle oracle(Template{0, 1, 3, 2, 2}, {4, 5, 1}, Mode(kBoth, LeakPayload::kPositionsValues));
  const AttackOutcome out = AttackBothPositionsValues(oracle);
  EXPECT_EQ(out.recovered, (Template{0, 1, 3, 2, 2}));
  EXPECT_EQ(out.queries_used, 1u);
  EXPECT_TRUE(out.exact_recovery);
  EXPECT_EQ(OracleSeal::reads(oracle), 0u);
}

TEST(BothPositionsTest, QuaternaryExampleFlagSets) {
  Oracle oracle(Template{0, 1, 3, 2, 2}, {4, 5, 1}, Mode(kBoth, LeakPayload::kPositions));
  std::vector<std::vector<int>> flags;
  oracle.set_response_sink([&](const MatchResponse& r) { flags.push_back(*r.positions); });
  const AttackOutcome out = AttackBothPositions(oracle);
  EXPECT_EQ(out.recovered, (Template{0, 1, 3, 2, 2}));
  EXPECT_EQ(out.queries_used, 3u);
  EXPECT_EQ(flags, (std::vector<std::vector<int>>{{1, 2, 3, 4}, {0, 2, 3, 4}, {0, 1, 2}}));
  EXPECT_EQ(OracleSeal::reads(oracle), 0u);
}

TEST(BothPositionsTest, ExhaustiveBinaryEquivalence) {
  for (int n = 1; n <= 10; ++n) {
    for (const Template& x : testing::AllPoints(2, n)) {
      Oracle oracle(x, {2, n, 0}, Mode(kBoth, LeakPayload::kPositions));
      const AttackOutcome out = AttackBothPositions(oracle);
      ASSERT_EQ(out.recovered, x);
      ASSERT_LE(out.queries_used, 1u);
    }
  }
}

TEST(BothDistanceTest, RandomTrialsWithinBound) {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const SpaceParams p{static_cast<int>(rng.UniformInt(2, 6)),
                        static_cast<int>(rng.UniformInt(1, 64)), 0};
    const Template x = SampleTemplate(p, rng);
    Oracle oracle(x, p, Mode(kBoth, LeakPayload::kDistance));
    const AttackOutcome out = AttackBothDistance(oracle);
    ASSERT_EQ(out.recovered, x);
    ASSERT_EQ(out.queries_used, oracle.query_count());
    ASSERT_LE(out.queries_used, Bound(Theorem::kBothDistance, p));
  }
}

TEST(BelowAttacksTest, QuaternaryExampleSweepAfterAcceptance) {
  // With e = 4 the all-zero query is accepted and the sweep finishes the job.
  const SpaceParams p{4, 5, 4};
  Oracle oracle(Template{0, 1, 3, 2, 2}, p, Mode(kBelow, LeakPayload::kPositions));
  const AttackOutcome out = AttackBelowPositions(oracle);
  EXPECT_EQ(out.recovered, (Template{0, 1, 3, 2, 2}));
  EXPECT_LE(out.queries_used, 1u + 3u);
}

TEST(BelowAttacksTest, PositionsValuesDirectRead) {
  const SpaceParams p{4, 5, 4};
  Oracle oracle(Template{0, 1, 3, 2, 2}, p, Mode(kBelow, LeakPayload::kPositionsValues));
  const AttackOutcome out = AttackBelowPositionsValues(oracle);
  EXPECT_EQ(out.recovered, (Template{0, 1, 3, 2, 2}));
  EXPECT_EQ(out.queries_used, 1u);
}

TEST(BelowAttacksTest, ExhaustiveSmallSpaces) {
  for (int q = 2; q <= 3; ++q) {
    for (int n = 1; n <= (q == 2 ? 8 : 5); ++n) {
      for (int e = 0; e < n; ++e) {
        const SpaceParams p{q, n, e};
        for (const Template& x : testing::AllPoints(q, n)) {
          Oracle od(x, p, Mode(kBelow, LeakPayload::kDistance));
          const AttackOutcome a = AttackBelowDistance(od);
          ASSERT_EQ(a.recovered, x) << x.ToString() << " e=" << e;
          ASSERT_LE(a.queries_used, Bound(Theorem::kBelowDistance, p));

          Oracle op(x, p, Mode(kBelow, LeakPayload::kPositions));
          const AttackOutcome b = AttackBelowPositions(op);
          ASSERT_EQ(b.recovered, x);
          ASSERT_LE(b.queries_used, Bound(Theorem::kBelowPositions, p));

          Oracle ov(x, p, Mode(kBelow, LeakPayload::kPositionsValues));
          const AttackOutcome c = AttackBelowPositionsValues(ov);
          ASSERT_EQ(c.recovered, x);
          ASSERT_LE(c.queries_used, Bound(Theorem::kBelowPositionsValues, p));
          ASSERT_EQ(OracleSeal::reads(od) + OracleSeal::reads(op) + OracleSeal::reads(ov), 0u);
        }
      }
    }
  }
}

TEST(ExhaustiveSearchTest, PinsTrailingCoordinates) {
  const SpaceParams p{2, 4, 1};
  Oracle oracle(Template{1, 1, 1, 1}, p, kMinimalLeakage);
  std::vector<Template> asked;
  const SearchResult s = ExhaustiveAcceptSearch(oracle);
  EXPECT_TRUE(s.response.accepted);
  EXPECT_EQ(s.accepted, (Template{1, 1, 1, 0}));
  EXPECT_EQ(s.queries, 8u);
}

TEST(CenterSearchTest, EveryInBallStartSmallSpaces) {
  for (int n = 1; n <= 7; ++n) {
    for (int e = 0; e < n; ++e) {
      const SpaceParams p{2, n, e};
      for (const Template& x : testing::AllPoints(2, n)) {
        for (const Template& y : testing::AllPoints(2, n)) {
          if (testing::NaiveDistance(x, y) > e) continue;
          Oracle oracle(x, p, kMinimalLeakage);
          const CenterSearchResult r = CenterSearchBinary(oracle, y);
          ASSERT_EQ(r.center, x) << "n=" << n << " e=" << e << " y=" << y.ToString();
          ASSERT_EQ(r.queries, oracle.query_count());
        }
      }
    }
  }
}

TEST(CenterSearchTest, RejectedStartIsUsageError) {
  Oracle oracle(Template{0, 0, 0, 0}, {2, 4, 1}, kMinimalLeakage);
  EXPECT_THROW(CenterSearchBinary(oracle, Template{1, 1, 0, 0}), UsageError);
}

TEST(MinimalBinaryTest, ExhaustiveRecoveryBothStrategies) {
  for (int n = 1; n <= 8; ++n) {
    for (int e = 0; e < n && e <= 3; ++e) {
      const SpaceParams p{2, n, e};
      for (const Template& x : testing::AllPoints(2, n)) {
        Oracle a(x, p, kMinimalLeakage);
        ASSERT_EQ(AttackMinimalBinary(a, MinimalStrategy::kCoordinateFixing).recovered, x);
        Oracle b(x, p, kMinimalLeakage);
        const AttackOutcome g = AttackMinimalBinary(b, MinimalStrategy::kGreedyCover);
        ASSERT_EQ(g.recovered, x);
        ASSERT_EQ(OracleSeal::reads(a) + OracleSeal::reads(b), 0u);
      }
    }
  }
}

TEST(ModeDisciplineTest, WeakerModesFailFast) {
  const Template x{0, 1, 1, 0};
  const SpaceParams p{2, 4, 1};
  Oracle minimal(x, p, kMinimalLeakage);
  EXPECT_THROW(AttackBothPositionsValues(minimal), UsageError);
  EXPECT_THROW(AttackBothPositions(minimal), UsageError);
  EXPECT_THROW(AttackBothDistance(minimal), UsageError);
  EXPECT_THROW(AttackBelowDistance(minimal), UsageError);
  Oracle below(x, p, Mode(kBelow, LeakPayload::kPositions));
  EXPECT_THROW(AttackBothPositions(below), UsageError);
  Oracle quaternary(Template{0, 1, 3, 2}, {4, 4, 1}, kMinimalLeakage);
  EXPECT_THROW(AttackMinimalBinary(quaternary, MinimalStrategy::kCoordinateFixing), UsageError);
  EXPECT_EQ(minimal.query_count(), 0u);
}

TEST(PartialTemplateTest, Rendering) {
  PartialTemplate z(4);
  z.Set(0, 1);
  z.Set(2, 0);
  EXPECT_EQ(z.ToString(), "1?0?");
  EXPECT_EQ(z.KnownCount(), 2u);
  EXPECT_EQ(z.UnknownCount(), 2u);
}

}  // namespace
}  // namespace leaklab
