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

#include "leaklab/accumulation.h"

#include <cmath>

#include <gtest/gtest.h>

#include "leaklab/errors.h"

namespace leaklab {
namespace {

const LeakageMode kPassive{LeakScope::kBelowOnly, LeakPayload::kPositionsValues};

TEST(ResolveErrorTest, EndpointRule) {
  EXPECT_EQ(ResolveError(2, 1), 1);
  EXPECT_EQ(ResolveError(2, -1), 0);
  EXPECT_EQ(ResolveError(5, 4), 4);
  EXPECT_EQ(ResolveError(5, -4), 0);
  EXPECT_FALSE(ResolveError(5, 2).has_value());
  EXPECT_FALSE(ResolveError(5, -1).has_value());
}

TEST(AccumulatorTest, SevenCoordinateTwoSessions) {
  const SpaceParams p{2, 7, 3};
  Oracle oracle(Template{0, 0, 1, 1, 0, 1, 0}, p, kPassive);
  Accumulator acc(p);
  EXPECT_EQ(acc.partial().ToString(), "???????");
  const MatchResponse s1 = oracle.Query(Template{1, 1, 0, 1, 0, 1, 0});
  Observation o1;
  for (std::size_t k = 0; k < s1.positions->size(); ++k) {
    o1.errors.push_back({(*s1.positions)[k], (*s1.values)[k]});
  }
  acc.Ingest(o1);
  EXPECT_EQ(acc.partial().ToString(), "001????");
  const MatchResponse s2 = oracle.Query(Template{0, 0, 0, 0, 1, 1, 0});
  EXPECT_EQ(*s2.distance, 3);
  Observation o2;
  for (std::size_t k = 0; k < s2.positions->size(); ++k) {
    o2.errors.push_back({(*s2.positions)[k], (*s2.values)[k]});
  }
  acc.Ingest(o2);
  EXPECT_EQ(acc.partial().ToString(), "00110??");
  EXPECT_EQ(acc.sessions(), 2u);
}

TEST(AccumulationCollectTest, UniformRecoversExactly) {
  Rng rng(2);
  const SpaceParams p{2, 20, 3};
  for (int t = 0; t < 50; ++t) {
    const Template x = SampleTemplate(p, rng);
    Oracle oracle(x, p, kPassive);
    const AttackOutcome out =
        AccumulationCollect(oracle, ClientModel::Uniform(20, SessionShape::kSingleError), rng);
    ASSERT_TRUE(out.exact_recovery);
    ASSERT_EQ(out.recovered, x);
    ASSERT_EQ(out.queries_used, 0u);
    ASSERT_GE(out.sessions_used, 20u);
    ASSERT_EQ(OracleSeal::reads(oracle), 0u);
  }
}

TEST(AccumulationCollectTest, CouponCollectorMean) {
  // E = n H(n) = 20 H(20) = 71.95479 for the uniform single-error client.
  Rng rng(77);
  const SpaceParams p{2, 20, 2};
  const auto client = ClientModel::Uniform(20, SessionShape::kSingleError);
  double total = 0;
  const int trials = 2000;
  for (int t = 0; t < trials; ++t) {
    Oracle oracle(SampleTemplate(p, rng), p, kPassive);
    total += AccumulationCollect(oracle, client, rng).sessions_used;
  }
  EXPECT_NEAR(total / trials, 71.95479, 71.95479 * 0.05);
}

TEST(AccumulationCollectTest, NonVariableCoordinatesStayUnknown) {
  Rng rng(5);
  const SpaceParams p{2, 8, 2};
  ClientModel client{{0.2, 0.2, 0.0, 0.2, 0.0, 0.2, 0.2, 0.0}, SessionShape::kSingleError};
  Oracle oracle(SampleTemplate(p, rng), p, kPassive);
  const AttackOutcome out = AccumulationCollect(oracle, client, rng);
  EXPECT_FALSE(out.partial->known(2));
  EXPECT_FALSE(out.partial->known(4));
  EXPECT_FALSE(out.partial->known(7));
  EXPECT_EQ(out.partial->UnknownCount(), 3u);
  EXPECT_FALSE(out.exact_recovery);
  EXPECT_FALSE(out.within_ball);
  // Extra sessions never reveal them either.
  Accumulator acc(p);
  for (int s = 0; s < 5000; ++s) acc.Ingest(oracle.GenuineSession(client, rng));
  EXPECT_FALSE(acc.Observed(2) || acc.Observed(4) || acc.Observed(7));
}

TEST(AccumulationCollectTest, WithinBallWhenFewUnknowns) {
  Rng rng(6);
  const SpaceParams p{2, 6, 2};
  ClientModel client{{0.25, 0.25, 0.25, 0.25, 0.0, 0.0}, SessionShape::kSingleError};
  const Template x = SampleTemplate(p, rng);
  Oracle oracle(x, p, kPassive);
  const AttackOutcome out = AccumulationCollect(oracle, client, rng);
  EXPECT_TRUE(out.within_ball);
  EXPECT_LE(OracleSeal::DistanceToSecret(oracle, out.recovered), 2);
}

TEST(AccumulationCollectTest, Preconditions) {
  Rng rng(1);
  const auto client = ClientModel::Uniform(4, SessionShape::kSingleError);
  Oracle wrong_mode(Template(4), {2, 4, 1}, {LeakScope::kAlways, LeakPayload::kPositionsValues});
  EXPECT_THROW(AccumulationCollect(wrong_mode, client, rng), UsageError);
  Oracle ternary(Template(4), {3, 4, 1}, kPassive);
  EXPECT_THROW(AccumulationCollect(ternary, client, rng), UsageError);
  Oracle ok(Template(4), {2, 4, 1}, kPassive);
  ClientModel holes{{0.5, 0.5, 0.0, 0.0}, SessionShape::kSingleError};
  EXPECT_THROW(AccumulationCollect(ok, holes, rng, std::vector<int>{0, 2}), UsageError);
}

TEST(FaultControlledTest, SessionCounts) {
  Rng rng(3);
  for (auto [n, e, want] : {std::tuple{7, 3, 3}, {12, 4, 3}, {9, 9, 1}, {64, 1, 64}}) {
    const SpaceParams p{2, n, e};
    const Template x = SampleTemplate(p, rng);
    Oracle oracle(x, p, kPassive);
    const AttackOutcome out = FaultControlledCollect(oracle);
    EXPECT_EQ(out.sessions_used, static_cast<std::uint64_t>(want));
    EXPECT_EQ(out.recovered, x);
    EXPECT_TRUE(out.exact_recovery);
    EXPECT_EQ(OracleSeal::reads(oracle), 0u);
  }
}

}  // namespace
}  // namespace leaklab
