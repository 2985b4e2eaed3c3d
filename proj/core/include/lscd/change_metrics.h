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

#ifndef LSCD_CHANGE_METRICS_H_
#define LSCD_CHANGE_METRICS_H_

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lscd/clustering.h"
#include "lscd/usage.h"

namespace lscd {

// Every scorer in the toolkit, contextual metrics first, then baselines.
enum class ScoreMethod { kPrt, kApd, kJsd, kFrequency, kCount, kProcrustes };

std::string_view ScoreMethodName(ScoreMethod method);

// Higher value means more change. `flagged` marks a score that was computed
// but sits on a degenerate path (see `note`); a non-finite value marks a word
// that could not be scored at all.
struct ChangeScore {
  std::string word;
  double value = std::numeric_limits<double>::quiet_NaN();
  ScoreMethod method = ScoreMethod::kPrt;
  bool flagged = false;
  std::string note;

  bool ok() const;
};

using ChangeScores = std::vector<ChangeScore>;

enum class PrtVariant {
  kInvertedSimilarity,  // 1 / max(s, kPrtEpsilon)
  kCosineDistance,      // 1 - s
};

inline constexpr double kPrtEpsilon = 1e-9;

std::string_view PrtVariantName(PrtVariant variant);
PrtVariant ParsePrtVariant(std::string_view name);

// dot(x, y) / (|x| |y|), clamped to [-1, 1]. Throws on a zero-norm input or a
// length mismatch.
double CosineSimilarity(const Eigen::Ref<const Eigen::VectorXd>& x,
                        const Eigen::Ref<const Eigen::VectorXd>& y);

// Mean of the rows of a non-empty usage matrix.
Eigen::VectorXd Prototype(const UsageMatrix& usage);

// Prototype-similarity change. Under kInvertedSimilarity a similarity below
// kPrtEpsilon is clamped and the score flagged.
ChangeScore Prt(const UsageMatrix& t1, const UsageMatrix& t2,
                PrtVariant variant = PrtVariant::kInvertedSimilarity);

// Mean cosine distance over all cross-period occurrence pairs, in [0, 2].
ChangeScore Apd(const UsageMatrix& t1, const UsageMatrix& t2);

// Normalised per-cluster occurrence counts for each period. `labels` covers
// the n1 t1 occurrences followed by the n2 t2 occurrences; both vectors span
// clusters 0..max(label).
std::pair<Eigen::VectorXd, Eigen::VectorXd> UsageDistributions(
    std::span<const int> labels, std::size_t n1, std::size_t n2);

// Jensen-Shannon divergence in bits, H((p+q)/2) - (H(p) + H(q))/2, in [0, 1].
double JensenShannon(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

// Clusters the standardised union of both periods' occurrences with Affinity
// Propagation and compares the per-period cluster distributions. A run that
// does not converge yields 0 and is flagged.
ChangeScore JsdScore(const UsageMatrix& t1, const UsageMatrix& t2,
                     const ApConfig& config = {});

}  // namespace lscd

#endif  // LSCD_CHANGE_METRICS_H_
