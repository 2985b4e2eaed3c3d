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

#include <boost/math/distributions/students_t.hpp>

#include "lscd/error.h"

namespace lscd {
namespace {

// Relative slack when comparing permuted statistics against the observed one;
// equal rank configurations reach the same value up to rounding.
constexpr double kTieSlack = 1e-12;

void CheckFinite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(std::string(what) + ": non-finite value");
  }
}

double ExactPermutationPValue(const std::vector<double>& cx,
                              const std::vector<double>& cy,
                              double observed_numerator) {
  const std::size_t n = cx.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  const double threshold =
      std::abs(observed_numerator) * (1.0 - kTieSlack) - 1e-300;
  std::size_t extreme = 0;
  std::size_t total = 0;
  do {
    double num = 0.0;
    for (std::size_t i = 0; i < n; ++i) num += cx[i] * cy[perm[i]];
    if (std::abs(num) >= threshold) ++extreme;
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(extreme) / static_cast<double>(total);
}

}  // namespace

std::string_view PValueMethodName(PValueMethod method) {
  return method == PValueMethod::kExactPermutation ? "exact-permutation"
                                                   : "t-approximation";
}

std::vector<double> AverageRanks(std::span<const double> values) {
  CheckFinite(values, "average ranks");
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share rank mean((i+1)..(j+1)).
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

EvalReport SpearmanOfValues(std::span<const double> x,
                            std::span<const double> y) {
  if (x.size() != y.size()) throw Error("spearman: paired lists differ in length");
  const std::size_t n = x.size();
  if (n < 3) {
    throw Error("spearman: need at least 3 paired values, got " +
                std::to_string(n));
  }
  const std::vector<double> rx = AverageRanks(x);
  const std::vector<double> ry = AverageRanks(y);
  const double mean_rank = 0.5 * static_cast<double>(n + 1);
  std::vector<double> cx(n), cy(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cx[i] = rx[i] - mean_rank;
    cy[i] = ry[i] - mean_rank;
    sxx += cx[i] * cx[i];
    syy += cy[i] * cy[i];
    sxy += cx[i] * cy[i];
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error("spearman: degenerate ranking (all values tied)");
  }

  EvalReport report;
  report.n = n;
  report.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  if (n <= kExactPermutationMaxN) {
    report.method = PValueMethod::kExactPermutation;
    report.p_value = ExactPermutationPValue(cx, cy, sxy);
  } else {
    report.method = PValueMethod::kTApproximation;
    const double r = report.rho;
    if (std::abs(r) >= 1.0) {
      report.p_value = 0.0;
    } else {
      const double dof = static_cast<double>(n - 2);
      const double t = r * std::sqrt(dof / (1.0 - r * r));
      const boost::math::students_t dist(dof);
      report.p_value =
          std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
    }
  }
  report.significant = report.p_value < kSignificanceLevel;
  return report;
}

EvalReport Spearman(const WordScores& predicted, const WordScores& gold) {
  std::vector<double> pred_values, gold_values;
  std::vector<std::string> missing;
  for (const auto& [word, g] : gold) {
    auto it = predicted.find(word);
    if (it == predicted.end()) {
      missing.push_back(word);
      continue;
    }
    pred_values.push_back(it->second);
    gold_values.push_back(g);
  }
  if (pred_values.size() < 3) {
    throw Error("spearman: predictions and gold overlap on " +
                std::to_string(pred_values.size()) +
                " words, need at least 3");
  }
  EvalReport report = SpearmanOfValues(pred_values, gold_values);
  report.missing_predictions = std::move(missing);
  return report;
}

LanguageAggregate AggregateLanguages(std::span<const EvalReport> reports) {
  if (reports.empty()) throw Error("aggregate: no reports");
  LanguageAggregate out;
  double sum = 0.0;
  for (const EvalReport& r : reports) {
    sum += r.rho;
    out.n_significant += r.p_value < kSignificanceLevel ? 1 : 0;
  }
  out.mean_rho = sum / static_cast<double>(reports.size());
  return out;
}

LanguageAggregate AggregateLanguages(std::span<const double> rhos) {
  if (rhos.empty()) throw Error("aggregate: no reports");
  LanguageAggregate out;
  out.mean_rho = std::accumulate(rhos.begin(), rhos.end(), 0.0) /
                 static_cast<double>(rhos.size());
  return out;
}

double Median(std::span<const double> values) {
  if (values.empty()) throw Error("median of empty list");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  return n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

DistributionStats ComputeDistributionStats(std::span<const double> scores,
                                           std::size_t n_bins) {
  if (scores.empty()) throw Error("distribution stats: empty input");
  if (n_bins == 0) throw Error("distribution stats: need at least one bin");
  CheckFinite(scores, "distribution stats");
  DistributionStats out;
  out.n = scores.size();
  out.median = Median(scores);
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  out.min = *lo;
  out.max = *hi;
  if (out.min == out.max) {
    out.bin_edges = {out.min, out.max};
    out.counts = {out.n};
    return out;
  }
  const double width = (out.max - out.min) / static_cast<double>(n_bins);
  out.bin_edges.resize(n_bins + 1);
  for (std::size_t b = 0; b < n_bins; ++b) {
    out.bin_edges[b] = out.min + width * static_cast<double>(b);
  }
  out.bin_edges[n_bins] = out.max;
  out.counts.assign(n_bins, 0);
  for (double v : scores) {
    auto bin = static_cast<std::size_t>((v - out.min) / width);
    out.counts[std::min(bin, n_bins - 1)] += 1;
  }
  return out;
}

std::vector<double> UnitNormalise(std::span<const double> values) {
  if (values.empty()) throw Error("unit normalise: empty input");
  const double max = *std::max_element(values.begin(), values.end());
  if (!(max > 0.0)) throw Error("unit normalise: maximum must be positive");
  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) v /= max;
  return out;
}

EvalReport MedianPerformanceCorrelation(
    std::span<const MedianPerformanceEntry> entries) {
  if (entries.size() < 3) {
    throw Error("median-performance: need at least 3 test sets");
  }
  std::vector<double> medians, performance;
  for (const auto& e : entries) {
    medians.push_back(e.gold_median);
    performance.push_back(e.performance);
  }
  return SpearmanOfValues(medians, performance);
}

}  // namespace lscd
