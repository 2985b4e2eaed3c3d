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

#ifndef LSCD_EVALUATION_H_
#define LSCD_EVALUATION_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lscd {

// word -> score. Used for both gold annotations and predictions.
using WordScores = std::map<std::string, double>;

enum class PValueMethod { kExactPermutation, kTApproximation };

std::string_view PValueMethodName(PValueMethod method);

// Largest n evaluated by exhaustive permutation; above it the Student-t
// approximation is used.
inline constexpr std::size_t kExactPermutationMaxN = 9;
inline constexpr double kSignificanceLevel = 0.05;

struct EvalReport {
  double rho = 0.0;
  double p_value = 1.0;  // two-sided
  std::size_t n = 0;
  bool significant = false;  // p_value < kSignificanceLevel
  PValueMethod method = PValueMethod::kExactPermutation;
  // Gold words without a prediction; excluded from the correlation.
  std::vector<std::string> missing_predictions;
};

// Fractional ranks 1..n; ties get the mean of the positions they span.
std::vector<double> AverageRanks(std::span<const double> values);

// Spearman correlation of two paired lists (Pearson correlation of their
// average ranks) with a two-sided p-value. Requires n >= 3 and non-constant
// inputs ("degenerate ranking" otherwise).
EvalReport SpearmanOfValues(std::span<const double> x,
                            std::span<const double> y);

// Correlates predictions with gold scores over the words present in both.
EvalReport Spearman(const WordScores& predicted, const WordScores& gold);

struct LanguageAggregate {
  double mean_rho = 0.0;
  int n_significant = 0;
};

// Unweighted mean of rho and the number of significant reports.
LanguageAggregate AggregateLanguages(std::span<const EvalReport> reports);
// Same, from bare correlation values (nothing counted as significant).
LanguageAggregate AggregateLanguages(std::span<const double> rhos);

struct DistributionStats {
  std::size_t n = 0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::vector<double> bin_edges;  // counts.size() + 1 entries
  std::vector<std::size_t> counts;
};

// Midpoint median for even n; equal-width histogram over [min, max] with the
// top edge inclusive. All-equal input yields a single bin.
DistributionStats ComputeDistributionStats(std::span<const double> scores,
                                           std::size_t n_bins);

double Median(std::span<const double> values);

// Divides every value by the maximum (which must be positive).
std::vector<double> UnitNormalise(std::span<const double> values);

struct MedianPerformanceEntry {
  std::string testset;
  double gold_median = 0.0;
  double performance = 0.0;
};

// Spearman correlation between test-set gold medians and a method's
// performance on those test sets.
EvalReport MedianPerformanceCorrelation(
    std::span<const MedianPerformanceEntry> entries);

}  // namespace lscd

#endif  // LSCD_EVALUATION_H_
