/* Copyright 2026 The augpipe Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "common/error.h"
#include "feats/normalize.h"
#include "oracles.h"
#include "test_util.h"

namespace augpipe {
namespace {

FeatureMatrix random_matrix(std::size_t T, std::size_t D, uint64_t seed, double scale = 10) {
  testutil::Gen g(seed);
  FeatureMatrix m(T, D);
  for (double& v : m.values()) v = g.real(-scale, scale) + 3.0;
  return m;
}

std::vector<std::vector<double>> rows_of(const FeatureMatrix& m) {
  std::vector<std::vector<double>> out;
  for (std::size_t t = 0; t < m.rows(); ++t) {
    out.emplace_back(m.row(t).begin(), m.row(t).end());
  }
  return out;
}

TEST(Stats, ConstantFramesHaveZeroVariance) {
  FeatureMatrix m(7, 3);
  for (std::size_t t = 0; t < 7; ++t) {
    m(t, 0) = 1.5;
    m(t, 1) = -2;
    m(t, 2) = 0;
  }
  const StatsMap s = accumulate_stats({{std::string("c"), m}});
  const ConversationStats& c = s.at("c");
  EXPECT_EQ(c.mean, (std::vector<double>{1.5, -2, 0}));
  EXPECT_EQ(c.variance, (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(c.frame_count, 7u);
}

TEST(Stats, HandArithmetic) {
  FeatureMatrix m(2, 1);
  m(0, 0) = 0;
  m(1, 0) = 2;
  const StatsMap s = accumulate_stats({{std::string("c"), m}});
  EXPECT_EQ(s.at("c").mean[0], 1.0);
  EXPECT_EQ(s.at("c").variance[0], 1.0);
}

TEST(Stats, PooledEqualsConcatenation) {
  const FeatureMatrix a = random_matrix(3, 40, 1);
  const FeatureMatrix b = random_matrix(5, 40, 2);
  const StatsMap s = accumulate_stats({{std::string("c"), a}, {std::string("c"), b}});
  auto rows = rows_of(a);
  for (auto& r : rows_of(b)) rows.push_back(r);
  const auto [mean, var] = oracle::moments(rows);
  for (std::size_t d = 0; d < 40; ++d) {
    EXPECT_NEAR(s.at("c").mean[d], mean[d], 1e-12);
    EXPECT_NEAR(s.at("c").variance[d], var[d], 1e-10);
  }
  EXPECT_EQ(s.at("c").frame_count, 8u);
}

TEST(Stats, OrderInvariantBitExact) {
  std::vector<std::pair<std::string, FeatureMatrix>> in;
  for (uint64_t i = 0; i < 6; ++i) {
    in.emplace_back(i % 2 ? "x" : "y", random_matrix(4 + i, 5, 10 + i, 1e3));
  }
  const StatsMap ref = accumulate_stats(in);
  testutil::Gen g(5);
  for (int trial = 0; trial < 20; ++trial) {
    for (std::size_t i = in.size() - 1; i > 0; --i) std::swap(in[i], in[g.range(0, i)]);
    const StatsMap s = accumulate_stats(in);
    for (const auto& [k, v] : ref) {
      EXPECT_EQ(s.at(k).mean, v.mean);
      EXPECT_EQ(s.at(k).variance, v.variance);
    }
  }
}

TEST(Stats, Errors) {
  EXPECT_THROW(accumulate_stats({{std::string("c"), FeatureMatrix(0, 4)}}), Error);
  EXPECT_THROW(accumulate_stats({{std::string("c"), FeatureMatrix(2, 4)},
                                 {std::string("c"), FeatureMatrix(2, 3)}}),
               Error);
}

TEST(Normalize, MeanInputGivesZeros) {
  const FeatureMatrix m = random_matrix(10, 4, 3);
  const ConversationStats s = accumulate_stats({{std::string("c"), m}}).at("c");
  FeatureMatrix at_mean(5, 4);
  for (std::size_t t = 0; t < 5; ++t) {
    for (std::size_t d = 0; d < 4; ++d) at_mean(t, d) = s.mean[d];
  }
  const FeatureMatrix out = normalize(at_mean, s);
  for (double v : out.values()) EXPECT_EQ(v, 0.0);
}

TEST(Normalize, ZeroVarianceChannelStaysFinite) {
  FeatureMatrix m = random_matrix(10, 3, 4);
  for (std::size_t t = 0; t < 10; ++t) m(t, 1) = 2.5;
  const ConversationStats s = accumulate_stats({{std::string("c"), m}}).at("c");
  EXPECT_EQ(s.variance[1], 0.0);
  const FeatureMatrix n = normalize(m, s);
  EXPECT_TRUE(n.all_finite());
  for (std::size_t t = 0; t < 10; ++t) EXPECT_EQ(n(t, 1), 0.0);
}

TEST(Normalize, SelfStatsGiveUnitMoments) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const FeatureMatrix m = random_matrix(100, 40, 100 + seed);
    const ConversationStats s = accumulate_stats({{std::string("c"), m}}).at("c");
    const FeatureMatrix n = normalize(m, s);
    const auto [mean, var] = oracle::moments(rows_of(n));
    for (std::size_t d = 0; d < 40; ++d) {
      EXPECT_LT(std::abs(mean[d]), 1e-6);
      EXPECT_NEAR(var[d], 1.0, 1e-4);
    }
  }
}

TEST(Normalize, InplaceMatchesCopy) {
  const FeatureMatrix m = random_matrix(20, 8, 7);
  const ConversationStats s = accumulate_stats({{std::string("c"), m}}).at("c");
  FeatureMatrix copy = m;
  normalize_inplace(copy, s);
  EXPECT_EQ(copy, normalize(m, s));
  FeatureMatrix wrong(3, 5);
  EXPECT_THROW(normalize_inplace(wrong, s), Error);
}

TEST(Stack, ShapesAndPadding) {
  FeatureMatrix m(6, 40);
  for (std::size_t t = 0; t < 6; ++t) {
    for (std::size_t d = 0; d < 40; ++d) m(t, d) = static_cast<double>(t * 100 + d + 1);
  }
  const FeatureMatrix s = stack_frames(m, 4);
  ASSERT_EQ(s.rows(), 2u);
  ASSERT_EQ(s.cols(), 160u);
  FeatureMatrix expected(2, 160, 0.0);
  for (std::size_t t = 0; t < 6; ++t) {
    for (std::size_t d = 0; d < 40; ++d) expected(t / 4, (t % 4) * 40 + d) = m(t, d);
  }
  EXPECT_EQ(s, expected);
  for (std::size_t c = 80; c < 160; ++c) EXPECT_EQ(s(1, c), 0.0);

  EXPECT_EQ(stack_frames(FeatureMatrix(4, 40, 1.0), 4).rows(), 1u);
  EXPECT_EQ(stack_frames(m, 1), m);
  EXPECT_THROW(stack_frames(m, 0), Error);
}

}  // namespace
}  // namespace augpipe
