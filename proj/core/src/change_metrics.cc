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

#include "lscd/change_metrics.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "lscd/error.h"

namespace lscd {
namespace {

// Grid spacing 2^-32 in standardised units.
constexpr double kSnapScale = 4294967296.0;

void CheckPair(const UsageMatrix& t1, const UsageMatrix& t2,
               std::string_view metric) {
  if (t1.rows() == 0 || t2.rows() == 0) {
    throw Error(std::string(metric) + ": empty period for '" + t1.word +
                "' (n_t1=" + std::to_string(t1.rows()) +
                ", n_t2=" + std::to_string(t2.rows()) + ")");
  }
  if (t1.dim() != t2.dim()) {
    throw Error(std::string(metric) + ": dimension mismatch for '" + t1.word +
                "'");
  }
}

double EntropyBits(const Eigen::VectorXd& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) h -= p(i) * std::log2(p(i));
  }
  return h;
}

void CheckDistribution(const Eigen::VectorXd& p, const char* name) {
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!(p(i) >= 0.0)) {
      throw Error(std::string("distribution ") + name +
                  " has a negative or non-finite entry");
    }
  }
  if (std::abs(p.sum() - 1.0) > 1e-9) {
    throw Error(std::string("distribution ") + name + " does not sum to 1");
  }
}

}  // namespace

std::string_view ScoreMethodName(ScoreMethod method) {
  switch (method) {
    case ScoreMethod::kPrt:
      return "prt";
    case ScoreMethod::kApd:
      return "apd";
    case ScoreMethod::kJsd:
      return "jsd";
    case ScoreMethod::kFrequency:
      return "fd";
    case ScoreMethod::kCount:
      return "count";
    case ScoreMethod::kProcrustes:
      return "procrustes";
  }
  return "?";
}

bool ChangeScore::ok() const { return std::isfinite(value); }

std::string_view PrtVariantName(PrtVariant variant) {
  return variant == PrtVariant::kInvertedSimilarity ? "inverted" : "distance";
}

PrtVariant ParsePrtVariant(std::string_view name) {
  if (name == "inverted") return PrtVariant::kInvertedSimilarity;
  if (name == "distance") return PrtVariant::kCosineDistance;
  throw Error("unknown PRT variant '" + std::string(name) +
              "' (expected inverted or distance)");
}

double CosineSimilarity(const Eigen::Ref<const Eigen::VectorXd>& x,
                        const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) {
    throw Error("cosine similarity: length mismatch (" +
                std::to_string(x.size()) + " vs " + std::to_string(y.size()) +
                ")");
  }
  const double nx = x.norm();
  const double ny = y.norm();
  if (nx == 0.0 || ny == 0.0) {
    throw Error("cosine similarity: zero-norm input");
  }
  return std::clamp(x.dot(y) / (nx * ny), -1.0, 1.0);
}

Eigen::VectorXd Prototype(const UsageMatrix& usage) {
  if (usage.rows() == 0) {
    throw Error("prototype: empty usage matrix for '" + usage.word + "'");
  }
  return usage.data.colwise().mean().transpose();
}

ChangeScore Prt(const UsageMatrix& t1, const UsageMatrix& t2,
                PrtVariant variant) {
  CheckPair(t1, t2, "prt");
  ChangeScore score;
  score.word = t1.word;
  score.method = ScoreMethod::kPrt;
  const Eigen::VectorXd p1 = Prototype(t1);
  const Eigen::VectorXd p2 = Prototype(t2);
  if (p1.norm() == 0.0 || p2.norm() == 0.0) {
    throw Error("prt: zero-norm prototype for '" + t1.word + "'");
  }
  const double s = CosineSimilarity(p1, p2);
  if (variant == PrtVariant::kCosineDistance) {
    score.value = 1.0 - s;
  } else if (s < kPrtEpsilon) {
    score.value = 1.0 / kPrtEpsilon;
    score.flagged = true;
    score.note = "prototype similarity " + std::to_string(s) +
                 " clamped to 1e-9 before inversion";
  } else {
    score.value = 1.0 / s;
  }
  return score;
}

ChangeScore Apd(const UsageMatrix& t1, const UsageMatrix& t2) {
  CheckPair(t1, t2, "apd");
  // mean_ij (1 - <a_i, b_j>) over unit rows equals 1 - <mean a, mean b>.
  auto mean_unit_row = [](const UsageMatrix& u) {
    const Eigen::VectorXd norms = u.data.rowwise().norm();
    if ((norms.array() == 0.0).any()) {
      throw Error("apd: zero-norm occurrence vector for '" + u.word + "' in " +
                  std::string(PeriodName(u.period)));
    }
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(u.data.cols());
    for (Eigen::Index i = 0; i < u.data.rows(); ++i) {
      sum += u.data.row(i).transpose() / norms(i);
    }
    return Eigen::VectorXd(sum / static_cast<double>(u.data.rows()));
  };
  ChangeScore score;
  score.word = t1.word;
  score.method = ScoreMethod::kApd;
  score.value =
      std::clamp(1.0 - mean_unit_row(t1).dot(mean_unit_row(t2)), 0.0, 2.0);
  return score;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> UsageDistributions(
    std::span<const int> labels, std::size_t n1, std::size_t n2) {
  if (n1 == 0 || n2 == 0) {
    throw Error("usage distributions: both periods need occurrences");
  }
  if (labels.size() != n1 + n2) {
    throw Error("usage distributions: " + std::to_string(labels.size()) +
                " labels for " + std::to_string(n1 + n2) + " occurrences");
  }
  int max_label = -1;
  for (int label : labels) {
    if (label < 0) throw Error("usage distributions: negative cluster label");
    max_label = std::max(max_label, label);
  }
  Eigen::VectorXd u1 = Eigen::VectorXd::Zero(max_label + 1);
  Eigen::VectorXd u2 = Eigen::VectorXd::Zero(max_label + 1);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (i < n1 ? u1 : u2)(labels[i]) += 1.0;
  }
  u1 /= static_cast<double>(n1);
  u2 /= static_cast<double>(n2);
  return {std::move(u1), std::move(u2)};
}

double JensenShannon(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size()) {
    throw Error("jensen-shannon: length mismatch (" + std::to_string(p.size()) +
                " vs " + std::to_string(q.size()) + ")");
  }
  CheckDistribution(p, "p");
  CheckDistribution(q, "q");
  const Eigen::VectorXd m = 0.5 * (p + q);
  const double jsd = EntropyBits(m) - 0.5 * (EntropyBits(p) + EntropyBits(q));
  return std::clamp(jsd, 0.0, 1.0);
}

ChangeScore JsdScore(const UsageMatrix& t1, const UsageMatrix& t2,
                     const ApConfig& config) {
  CheckPair(t1, t2, "jsd");
  Eigen::MatrixXd joint(t1.data.rows() + t2.data.rows(), t1.data.cols());
  joint << t1.data, t2.data;
  // Snap standardised coordinates to a fixed grid so that inputs which differ
  // only by rounding (rescaled or reordered usages) cluster identically.
  const Eigen::MatrixXd z = Standardise(joint).unaryExpr(
      [](double v) { return std::nearbyint(v * kSnapScale) / kSnapScale; });
  const Clustering clustering = AffinityPropagation(z, config);

  ChangeScore score;
  score.word = t1.word;
  score.method = ScoreMethod::kJsd;
  const auto [u1, u2] = UsageDistributions(clustering.labels, t1.rows(), t2.rows());
  score.value = JensenShannon(u1, u2);
  if (!clustering.converged) {
    score.flagged = true;
    score.note = "affinity propagation did not converge after " +
                 std::to_string(clustering.iterations) +
                 " iterations; collapsed to one cluster";
  }
  return score;
}

}  // namespace lscd
