// Copyright 2026 The lscd Authors.
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

#include "lscd/evaluation.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "lscd/error.h"
#include "testing/oracles.h"

namespace lscd {
namespace {

using V = std::vector<double>;

TEST(AverageRanksTest, Examples) {
  EXPECT_EQ(AverageRanks(V{10, 20, 30}), (V{1, 2, 3}));
  EXPECT_EQ(AverageRanks(V{5, 5}), (V{1.5, 1.5}));
  EXPECT_EQ(AverageRanks(V{3, 1, 3, 2}), (V{3.5, 1, 3.5, 2}));
  EXPECT_EQ(AverageRanks(V{}), V{});
}

TEST(AverageRanksTest, MatchesCountingOracle) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> small(0, 4);
  for (int trial = 0; trial < 200; ++trial) {
    V v(1 + trial % 15);
    for (double& x : v) x = small(rng);
    EXPECT_EQ(AverageRanks(v), testing::CountingRanks(v));
  }
}

TEST(SpearmanTest, PerfectAgreementAndReversal) {
  const V gold{0.1, 0.5, 0.3, 0.9, 0.7};
  EXPECT_EQ(SpearmanOfValues(gold, gold).rho, 1.0);
  V reversed(gold);
  for (double& x : reversed) x = -x;
  EXPECT_EQ(SpearmanOfValues(reversed, gold).rho, -1.0);
}

TEST(SpearmanTest, MediansAgainstApdArePerfectlyNegative) {
  const V medians{0.200, 0.203, 0.266, 0.267, 0.364};
  const V apd{0.605, 0.569, 0.560, 0.323, -0.113};
  const EvalReport r = SpearmanOfValues(medians, apd);
  EXPECT_EQ(r.rho, -1.0);
  EXPECT_EQ(r.n, 5u);
}

TEST(SpearmanTest, ExactPValueForPerfectFive) {
  const EvalReport r = SpearmanOfValues(V{1, 2, 3, 4, 5}, V{1, 2, 3, 4, 5});
  EXPECT_EQ(r.method, PValueMethod::kExactPermutation);
  EXPECT_NEAR(r.p_value, 2.0 / 120.0, 1e-15);
  EXPECT_TRUE(r.significant);
}

TEST(SpearmanTest, ExactPValuesMatchEnumerationOracle) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> values(0, 6);
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 3 + trial % 7;  // 3..9
    V x(n), y(n);
    for (double& v : x) v = values(rng);
    for (double& v : y) v = values(rng);
    if (std::adjacent_find(x.begin(), x.end(), std::not_equal_to<>()) == x.end() ||
        std::adjacent_find(y.begin(), y.end(), std::not_equal_to<>()) == y.end()) {
      continue;
    }
    const EvalReport r = SpearmanOfValues(x, y);
    ASSERT_EQ(r.method, PValueMethod::kExactPermutation);
    EXPECT_NEAR(r.rho, testing::SpearmanRho(x, y), 1e-12);
    EXPECT_NEAR(r.p_value, testing::PermutationPValue(x, y), 1e-12)
        << "trial " << trial;
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(SpearmanTest, TApproximationAboveNine) {
  V x(12);
  std::iota(x.begin(), x.end(), 0.0);
  // Reference values from an independent statistics package.
  const EvalReport a =
      SpearmanOfValues(x, V{2, 1, 4, 3, 6, 5, 8, 7, 10, 9, 12, 11});
  EXPECT_EQ(a.method, PValueMethod::kTApproximation);
  EXPECT_NEAR(a.rho, 0.9580419580419581, 1e-12);
  EXPECT_NEAR(a.p_value, 9.5435818268384e-07, 1e-15);
  const EvalReport b =
      SpearmanOfValues(x, V{5, 1, 9, 3, 12, 2, 8, 7, 10, 4, 6, 11});
  EXPECT_NEAR(b.rho, 0.35664335664335667, 1e-12);
  EXPECT_NEAR(b.p_value, 0.25513775175895725, 1e-10);
  EXPECT_FALSE(b.significant);
}

TEST(SpearmanTest, Errors) {
  EXPECT_THROW(SpearmanOfValues(V{1, 2}, V{1, 2}), Error);
  EXPECT_THROW(SpearmanOfValues(V{1, 2, 3}, V{1, 2}), Error);
  try {
    SpearmanOfValues(V{1, 1, 1, 1}, V{1, 2, 3, 4});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("degenerate ranking"), std::string::npos);
  }
  EXPECT_THROW(SpearmanOfValues(V{1, NAN, 3}, V{1, 2, 3}), Error);
}

TEST(SpearmanTest, WordScoresUseIntersection) {
  const WordScores gold{{"a", 0.1}, {"b", 0.2}, {"c", 0.3}, {"d", 0.4}};
  const WordScores pred{{"a", 1.0}, {"b", 2.0}, {"d", 3.0}, {"extra", 9.0}};
  const EvalReport r = Spearman(pred, gold);
  EXPECT_EQ(r.n, 3u);
  EXPECT_EQ(r.rho, 1.0);
  EXPECT_EQ(r.missing_predictions, std::vector<std::string>{"c"});
  EXPECT_THROW(Spearman(WordScores{{"a", 1}, {"b", 2}}, gold), Error);
}

TEST(SpearmanTest, InvariantUnderMonotoneTransform) {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 50; ++trial) {
    V x(4 + trial % 20), y(x.size());
    for (double& v : x) v = gauss(rng);
    for (double& v : y) v = gauss(rng);
    V ex(x);
    for (double& v : ex) v = std::exp(3.0 * v) + 7.0;
    const EvalReport a = SpearmanOfValues(x, y);
    const EvalReport b = SpearmanOfValues(ex, y);
    EXPECT_NEAR(a.rho, b.rho, 1e-12);
    EXPECT_NEAR(a.p_value, b.p_value, 1e-12);
    EXPECT_GE(a.p_value, 0.0);
    EXPECT_LE(a.p_value, 1.0);
    EXPECT_LE(std::abs(a.rho), 1.0);
  }
}

TEST(AggregateLanguagesTest, ReportedMeans) {
  EXPECT_NEAR(AggregateLanguages(V{0.605, 0.560, -0.113, 0.569}).mean_rho, 0.405,
              0.0005);
  EXPECT_NEAR(AggregateLanguages(V{0.254, 0.740, 0.360, 0.252}).mean_rho, 0.402,
              0.0005 + 1e-12);
  EXPECT_NEAR(AggregateLanguages(V{0.605, 0.740, 0.561, 0.569}).mean_rho, 0.618,
              0.001);
  EXPECT_THROW(AggregateLanguages(V{}), Error);
}

TEST(AggregateLanguagesTest, CountsSignificantReports) {
  std::vector<EvalReport> reports(3);
  reports[0].rho = 0.5;
  reports[0].p_value = 0.01;
  reports[1].rho = 0.1;
  reports[1].p_value = 0.5;
  reports[2].rho = 0.3;
  reports[2].p_value = 0.049;
  const LanguageAggregate a = AggregateLanguages(reports);
  EXPECT_NEAR(a.mean_rho, 0.3, 1e-15);
  EXPECT_EQ(a.n_significant, 2);
}

TEST(DistributionStatsTest, Examples) {
  const DistributionStats one = ComputeDistributionStats(V{0.5}, 10);
  EXPECT_EQ(one.median, 0.5);
  EXPECT_EQ(one.counts, std::vector<std::size_t>{1});
  EXPECT_EQ(ComputeDistributionStats(V{1, 2, 3, 4}, 3).median, 2.5);
  const DistributionStats h = ComputeDistributionStats(V{0, 1, 2, 3, 4}, 2);
  EXPECT_EQ(h.bin_edges, (V{0, 2, 4}));
  EXPECT_EQ(h.counts, (std::vector<std::size_t>{2, 3}));
  EXPECT_THROW(ComputeDistributionStats(V{}, 3), Error);
  EXPECT_THROW(ComputeDistributionStats(V{1}, 0), Error);
}

TEST(DistributionStatsTest, ScaleProperty) {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // Powers of two keep the scaled bin arithmetic exact.
  for (double scale : {0.25, 2.0, 8.0}) {
    for (int trial = 0; trial < 30; ++trial) {
      V v(1 + trial % 17);
      for (double& x : v) x = u(rng);
      V scaled(v);
      for (double& x : scaled) x *= scale;
      const auto a = ComputeDistributionStats(v, 7);
      const auto b = ComputeDistributionStats(scaled, 7);
      EXPECT_EQ(b.median, a.median * scale);
      EXPECT_EQ(a.counts, b.counts);
      std::size_t total = 0;
      for (auto c : a.counts) total += c;
      EXPECT_EQ(total, v.size());
    }
  }
}

TEST(UnitNormaliseTest, DividesByMaximum) {
  EXPECT_EQ(UnitNormalise(V{1, 2, 4}), (V{0.25, 0.5, 1}));
  EXPECT_THROW(UnitNormalise(V{-1, 0}), Error);
  EXPECT_THROW(UnitNormalise(V{}), Error);
}

TEST(MedianPerformanceTest, Examples) {
  const std::vector<MedianPerformanceEntry> reported{
      {"a", 0.200, 0.605}, {"b", 0.203, 0.569}, {"c", 0.266, 0.560},
      {"d", 0.267, 0.323}, {"e", 0.364, -0.113}};
  EXPECT_EQ(MedianPerformanceCorrelation(reported).rho, -1.0);

  const std::vector<MedianPerformanceEntry> constant{
      {"a", 0.3, 0.1}, {"b", 0.3, 0.2}, {"c", 0.3, 0.3}};
  try {
    MedianPerformanceCorrelation(constant);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("degenerate ranking"), std::string::npos);
  }
  const std::vector<MedianPerformanceEntry> monotone{
      {"a", 0.1, 0.2}, {"b", 0.2, 0.25}, {"c", 0.7, 0.9}};
  EXPECT_EQ(MedianPerformanceCorrelation(monotone).rho, 1.0);
  EXPECT_THROW(MedianPerformanceCorrelation(
                   std::vector<MedianPerformanceEntry>(reported.begin(), reported.begin() + 2)),
               Error);
}

}  // namespace
}  // namespace lscd
