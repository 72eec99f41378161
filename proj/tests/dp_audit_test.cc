//
// Copyright 2026 The Privchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "privchan/dp_audit.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "privchan/errors.h"
#include "privchan/mechanisms.h"
#include "testing/generators.h"

namespace privchan {
namespace {

QueryTable MatchQuery() {
  return QueryTable(RecordUniverse({3, 2}), 2, {1, 0, 0, 0, 1, 0});
}

TEST(DpEpsilonTest, ConstantChannelIsZero) {
  const ChannelMatrix ch(RecordUniverse({2, 2}),
                         Matrix::FromRows({{0.4, 0.4, 0.4, 0.4},
                                           {0.6, 0.6, 0.6, 0.6}}));
  const DpAuditReport r = DpEpsilon(ch);
  EXPECT_EQ(r.epsilon_star, 0.0);
  EXPECT_TRUE(CheckDp(ch, 0.0).pass);
}

TEST(DpEpsilonTest, RandomizedResponseClosedForm) {
  for (int tenth = 1; tenth <= 9; ++tenth) {
    const double p = tenth / 10.0;
    EXPECT_NEAR(DpEpsilon(RandomizedResponseChannel(MatchQuery(), p)).epsilon_star,
                std::abs(std::log((1 - p) / p)), 1e-12);
  }
}

TEST(DpEpsilonTest, WitnessDiffersInOneRecord) {
  const ChannelMatrix ch = RandomizedResponseChannel(MatchQuery(), 0.25);
  const DpAuditReport r = DpEpsilon(ch);
  EXPECT_NEAR(r.epsilon_star, std::log(3.0), 1e-15);
  ASSERT_TRUE(r.witness.has_value());
  const auto a = ch.universe().Decode(r.witness->dataset);
  const auto b = ch.universe().Decode(r.witness->neighbor);
  int differing = 0;
  for (std::size_t k = 0; k < a.size(); ++k) differing += a[k] != b[k];
  EXPECT_EQ(differing, 1);
  EXPECT_NE(a[r.witness->individual], b[r.witness->individual]);
}

TEST(DpEpsilonTest, ZerosGiveInfinity) {
  const QueryTable q(RecordUniverse({2, 2}), 2, {0, 1, 1, 0});
  const ChannelMatrix ch = RandomizedResponseChannel(q, 0.0, true);
  EXPECT_TRUE(std::isinf(DpEpsilon(ch).epsilon_star));
  EXPECT_FALSE(CheckDp(ch, 100.0).pass);
}

TEST(DpEpsilonTest, ZeroZeroPairsAreIgnored) {
  // Output 2 is impossible everywhere, so it contributes no ratio.
  const ChannelMatrix ch(RecordUniverse({2}),
                         Matrix::FromRows({{0.5, 0.25}, {0.5, 0.75}, {0, 0}}));
  EXPECT_NEAR(DpEpsilon(ch).epsilon_star, std::log(2.0), 1e-15);
}

TEST(CheckDpTest, PassAndFailAroundLn3) {
  const ChannelMatrix ch = RandomizedResponseChannel(MatchQuery(), 0.25);
  const DpAuditReport pass = CheckDp(ch, 1.1);
  EXPECT_TRUE(pass.pass);
  EXPECT_EQ(pass.epsilon, 1.1);
  const DpAuditReport fail = CheckDp(ch, 1.0);
  EXPECT_FALSE(fail.pass);
  EXPECT_TRUE(fail.witness.has_value());
  EXPECT_TRUE(CheckDp(ch, std::log(3.0)).pass);
  EXPECT_THROW(CheckDp(ch, -1.0), DomainError);
}

TEST(DpEpsilonTest, InvariantUnderRelabeling) {
  testing::Rng rng(41);
  for (int t = 0; t < 50; ++t) {
    const ChannelMatrix ch = testing::RandomChannel(rng, {3, 2}, 3);
    const double eps = DpEpsilon(ch).epsilon_star;
    // Reverse output order and relabel x1 by a cyclic shift.
    const RecordUniverse& u = ch.universe();
    Matrix m(3, u.size());
    for (std::size_t x = 0; x < u.size(); ++x) {
      auto c = u.Decode(x);
      c[0] = (c[0] + 1) % 3;
      const std::size_t target = u.Encode(c);
      for (std::size_t y = 0; y < 3; ++y) m(2 - y, target) = ch(y, x);
    }
    EXPECT_NEAR(DpEpsilon(ChannelMatrix(u, m)).epsilon_star, eps, 1e-12);
  }
}

Matrix MixTowardsUniform(Matrix m, double c) {
  for (std::size_t x = 0; x < m.cols(); ++x) {
    for (std::size_t y = 0; y < m.rows(); ++y) {
      m(y, x) = (m(y, x) + c) / (1 + c * static_cast<double>(m.rows()));
    }
  }
  return m;
}

TEST(DpEpsilonTest, MixingTowardsUniformContractsRatios) {
  testing::Rng rng(42);
  for (int t = 0; t < 100; ++t) {
    // A single record with two values: the only column pair.
    const ChannelMatrix pair = testing::RandomChannel(rng, {2}, 2);
    EXPECT_LE(DpEpsilon(ChannelMatrix(pair.universe(),
                                      MixTowardsUniform(pair.entries(), 0.3)))
                  .epsilon_star,
              DpEpsilon(pair).epsilon_star + 1e-12);
    const ChannelMatrix grid = testing::RandomChannel(rng, {2, 2}, 2);
    EXPECT_LE(DpEpsilon(ChannelMatrix(grid.universe(),
                                      MixTowardsUniform(grid.entries(), 0.3)))
                  .epsilon_star,
              DpEpsilon(grid).epsilon_star + 1e-12);
  }
}

TEST(CrossCheckTest, ForwardHoldsForRandomizedResponse) {
  const ChannelMatrix ch = RandomizedResponseChannel(MatchQuery(), 0.25);
  const ProductPriorCrossCheck c =
      CrossCheckProductPriors(ch, std::log(3.0), 200, 1);
  EXPECT_TRUE(c.dp_passes);
  EXPECT_EQ(c.violations, 0);
  EXPECT_TRUE(c.consistent);
  EXPECT_LE(c.max_sampled, std::log(3.0) + 1e-9);
  EXPECT_GT(c.max_sampled, 0.0);
}

TEST(CrossCheckTest, ConstantChannelSamplesZero) {
  const ChannelMatrix ch(RecordUniverse({2, 3}),
                         Matrix(1, 6, 1.0));
  const ProductPriorCrossCheck c = CrossCheckProductPriors(ch, 0.0, 20, 2);
  EXPECT_TRUE(c.dp_passes);
  EXPECT_EQ(c.max_sampled, 0.0);
}

TEST(CrossCheckTest, ConverseFindsInfiniteSentinel) {
  const QueryTable q(RecordUniverse({2, 2}), 2, {0, 1, 1, 0});
  const ChannelMatrix ch = RandomizedResponseChannel(q, 0.0, true);
  const ProductPriorCrossCheck c = CrossCheckProductPriors(ch, 1.0, 10, 3);
  EXPECT_FALSE(c.dp_passes);
  ASSERT_TRUE(c.converse_max.has_value());
  EXPECT_TRUE(std::isinf(*c.converse_max));
  EXPECT_TRUE(c.consistent);
}

TEST(CrossCheckTest, ConverseExceedsBudget) {
  const ChannelMatrix ch = RandomizedResponseChannel(MatchQuery(), 0.25);
  const ProductPriorCrossCheck c = CrossCheckProductPriors(ch, 1.0, 10, 4);
  EXPECT_FALSE(c.dp_passes);
  ASSERT_TRUE(c.converse_max.has_value());
  EXPECT_GT(*c.converse_max, 1.0);
  EXPECT_LE(*c.converse_max, std::log(3.0) + 1e-9);
}

TEST(CrossCheckTest, DeterministicForSeed) {
  testing::Rng rng(43);
  const ChannelMatrix ch = testing::RandomChannel(rng, {3, 3}, 3);
  const double eps = DpEpsilon(ch).epsilon_star;
  EXPECT_EQ(CrossCheckProductPriors(ch, eps, 30, 9).max_sampled,
            CrossCheckProductPriors(ch, eps, 30, 9).max_sampled);
  EXPECT_THROW(CrossCheckProductPriors(ch, eps, 0, 9), DomainError);
}

}  // namespace
}  // namespace privchan
