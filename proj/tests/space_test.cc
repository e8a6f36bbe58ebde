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

#include "leaklab/space.h"

#include <cmath>

#include <gtest/gtest.h>

#include "leaklab/errors.h"
#include "test_oracles.h"

namespace leaklab {
namespace {

TEST(HammingDistanceTest, ExampleSessionVector) {
  const Template x{0, 0, 1, 1, 0, 1, 0};
  const Template y{1, 1, 0, 1, 0, 1, 0};
  EXPECT_EQ(HammingDistance(x, y), 3);
  EXPECT_EQ(HammingDistance(x, x), 0);
}

TEST(HammingDistanceTest, QuaternaryExampleVector) {
  EXPECT_EQ(HammingDistance(Template{0, 1, 3, 2, 2}, Template{0, 0, 0, 0, 0}), 4);
}

TEST(HammingDistanceTest, DimensionMismatchIsUsageError) {
  EXPECT_THROW(HammingDistance(Template{0, 1}, Template{0, 1, 1}), UsageError);
}

TEST(HammingDistanceTest, MetricAxiomsOnRandomTriples) {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const SpaceParams p{static_cast<int>(rng.UniformInt(2, 6)),
                        static_cast<int>(rng.UniformInt(1, 80)), 0};
    const Template x = SampleTemplate(p, rng);
    const Template y = SampleTemplate(p, rng);
    const Template z = SampleTemplate(p, rng);
    const int dxy = HammingDistance(x, y);
    EXPECT_EQ(dxy, testing::NaiveDistance(x, y));
    EXPECT_EQ(dxy, HammingDistance(y, x));
    EXPECT_EQ(dxy == 0, x == y);
    EXPECT_LE(HammingDistance(x, z), dxy + HammingDistance(y, z));
  }
}

TEST(BallVolumeTest, SmallCases) {
  EXPECT_EQ(testing::EnumeratedBallVolume(2, 3, 1), 4u);
  EXPECT_EQ(BallVolume({2, 3, 1}), 4);
  EXPECT_EQ(BallVolume({2, 5, 0}), 1);
  EXPECT_EQ(BallVolume({4, 5, 5}), 1024);
  EXPECT_EQ(BallVolume({2, 10, 2}), 56);
  EXPECT_EQ(BallVolume({2, 8, 2}), 37);
}

TEST(BallVolumeTest, MatchesEnumerationAndIsMonotone) {
  for (int q = 2; q <= 4; ++q) {
    for (int n = 1; n <= 7; ++n) {
      BigInt previous = 0;
      for (int e = 0; e <= n; ++e) {
        const BigInt v = BallVolume({q, n, e});
        EXPECT_EQ(v, testing::EnumeratedBallVolume(q, n, e)) << q << " " << n << " " << e;
        EXPECT_GE(v, previous);
        previous = v;
      }
      EXPECT_EQ(previous, IntPow(q, n));
    }
  }
}

TEST(BallVolumeTest, ExactBeyondSixtyFourBits) {
  // C(200,100) alone exceeds 2^64; the ball at e = n is 2^200 exactly.
  EXPECT_EQ(BallVolume({2, 200, 200}), IntPow(2, 200));
  EXPECT_GT(BallVolume({2, 200, 100}), BigInt(std::numeric_limits<std::uint64_t>::max()));
}

TEST(BallVolumeTest, EntropyUpperBound) {
  for (int q : {2, 4}) {
    for (int n = 1; n <= 20; ++n) {
      for (int e = 0; e <= n; ++e) {
        const double r = static_cast<double>(e) / n;
        if (r > 1.0 - 1.0 / q) continue;
        const double lhs = std::log(BallVolume({q, n, e}).convert_to<double>()) / std::log(q);
        EXPECT_LE(lhs, n * QAryEntropy(q, r) + 1e-9) << q << " " << n << " " << e;
      }
    }
  }
}

TEST(EntropyTest, KnownValues) {
  EXPECT_NEAR(QAryEntropy(2, 0.5), 1.0, 1e-12);
  EXPECT_EQ(QAryEntropy(2, 0.0), 0.0);
  EXPECT_NEAR(QAryEntropy(4, 0.75), 1.0, 1e-12);
  EXPECT_NEAR(QAryEntropy(3, 1.0), std::log(2.0) / std::log(3.0), 1e-12);
  EXPECT_THROW(QAryEntropy(2, 1.5), UsageError);
}

TEST(EntropyTest, ConcaveWithMaximumAtOneMinusOneOverQ) {
  for (int q : {2, 3, 4, 7}) {
    const double peak = 1.0 - 1.0 / q;
    EXPECT_NEAR(QAryEntropy(q, peak), 1.0, 1e-12);
    const int steps = 200;
    for (int k = 1; k < steps; ++k) {
      const double h = peak / steps;
      const double r = k * h;
      EXPECT_LE(QAryEntropy(q, r), 1.0 + 1e-12);
      const double second =
          QAryEntropy(q, r - h) - 2 * QAryEntropy(q, r) + QAryEntropy(q, r + h);
      EXPECT_LE(second, 1e-12) << "q=" << q << " r=" << r;
    }
  }
}

TEST(HarmonicTest, ValuesAndLogBound) {
  EXPECT_EQ(Harmonic(1), 1.0);
  EXPECT_NEAR(Harmonic(4), 25.0 / 12.0, 1e-15);
  EXPECT_EQ(HarmonicExact(4), BigRational(25, 12));
  EXPECT_THROW(Harmonic(0), UsageError);
  double h = 0.0;
  for (int n = 1; n <= 1'000'000; ++n) {
    h += 1.0 / n;
    ASSERT_LE(h, std::log(static_cast<double>(n)) + 1.0 + 1e-12) << n;
  }
}

TEST(SamplingTest, DeterministicForASeed) {
  const SpaceParams p{5, 64, 3};
  Rng a(1234);
  Rng b(1234);
  EXPECT_EQ(SampleTemplate(p, a), SampleTemplate(p, b));
}

TEST(SamplingTest, RangeAndMean) {
  Rng rng(3);
  const Template t4 = SampleTemplate({4, 5, 0}, rng);
  for (std::size_t i = 0; i < t4.size(); ++i) EXPECT_LT(t4[i], 4);
  const Template bits = SampleTemplate({2, 1000, 0}, rng);
  double sum = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) sum += bits[i];
  EXPECT_NEAR(sum / 1000.0, 0.5, 0.05);
}

TEST(SamplingTest, AtDistanceHasExactDistance) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const SpaceParams p{static_cast<int>(rng.UniformInt(2, 7)),
                        static_cast<int>(rng.UniformInt(1, 40)), 0};
    const Template x = SampleTemplate(p, rng);
    const int k = static_cast<int>(rng.UniformInt(0, p.n));
    const Template y = SampleAtDistance(p, x, k, rng);
    EXPECT_TRUE(y.Conforms(p));
    EXPECT_EQ(HammingDistance(x, y), k);
  }
  const SpaceParams p{2, 7, 3};
  const Template x{0, 0, 1, 1, 0, 1, 0};
  EXPECT_EQ(SampleAtDistance(p, x, 0, rng), x);
  EXPECT_THROW(SampleAtDistance(p, x, 8, rng), UsageError);
  EXPECT_THROW(SampleAtDistance(p, x, -1, rng), UsageError);
}

TEST(SamplingTest, AtDistancePositionsAreUniform) {
  // Each coordinate should be chosen with probability k/n.
  const SpaceParams p{3, 10, 0};
  const Template x(10);
  Rng rng(5);
  std::vector<int> hits(10, 0);
  const int draws = 20000;
  for (int t = 0; t < draws; ++t) {
    const Template y = SampleAtDistance(p, x, 3, rng);
    for (int i = 0; i < 10; ++i) hits[i] += y[i] != 0;
  }
  for (int h : hits) EXPECT_NEAR(h / static_cast<double>(draws), 0.3, 0.02);
}

TEST(SpaceParamsTest, Validation) {
  EXPECT_THROW((SpaceParams{1, 4, 0}.Validate()), UsageError);
  EXPECT_THROW((SpaceParams{2, 0, 0}.Validate()), UsageError);
  EXPECT_THROW((SpaceParams{2, 4, 5}.Validate()), UsageError);
  EXPECT_NO_THROW((SpaceParams{2, 4, 4}.Validate()));
  EXPECT_THROW((SpaceParams{2, 4, 4}.RequireEpsilonBelowN()), UsageError);
}

TEST(TemplateTest, StringRoundTrip) {
  const Template t{0, 1, 3, 2, 2};
  EXPECT_EQ(t.ToString(), "01322");
  EXPECT_EQ(Template::FromString("01322"), t);
  EXPECT_THROW(Template::FromString("01-2"), UsageError);
}

}  // namespace
}  // namespace leaklab
