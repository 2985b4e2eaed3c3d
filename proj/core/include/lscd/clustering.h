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

#ifndef LSCD_CLUSTERING_H_
#define LSCD_CLUSTERING_H_

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace lscd {

// Affinity Propagation settings. Similarities are negative squared Euclidean
// distances; when `preference` is empty every point's self-similarity is the
// median of the off-diagonal similarities.
struct ApConfig {
  double damping = 0.5;
  int max_iterations = 200;
  int convergence_iterations = 15;
  std::optional<double> preference;
  // Adds uniform noise of magnitude at most 1e-12 * |s(i,k)| to every
  // similarity, which breaks exact ties between identical points.
  bool tie_noise = false;
  std::uint64_t tie_noise_seed = 0;
  // Remedies for a run that oscillates without converging, tried in turn
  // until one converges: tie noise at `damping` (when tie_noise is off), then
  // each factor of retry_damping above `damping`, with tie noise. When false
  // the first non-converged run is reported as is.
  bool retry_on_oscillation = true;
  std::vector<double> retry_damping = {0.7, 0.9};

  // Throws lscd::Error unless every damping factor is in [0.5, 1) and
  // max_iterations >= convergence_iterations >= 1.
  void Validate() const;
};

struct Clustering {
  // labels[i] is the cluster of point i; exemplars[labels[i]] is its exemplar
  // and labels[exemplars[k]] == k. Clusters are numbered by ascending exemplar
  // index.
  std::vector<int> labels;
  std::vector<int> exemplars;
  int n_clusters = 0;
  // False when message passing hit max_iterations without a stable exemplar
  // set (or with no exemplar at all). The result then collapses to a single
  // cluster whose exemplar is the point with the largest summed similarity.
  bool converged = false;
  // Settings of the attempt that produced this result.
  int iterations = 0;
  double damping = 0.0;
  bool tie_noise = false;
  double preference = 0.0;
};

// Column-wise z-scoring with population standard deviation. Constant columns
// become all zeros.
Eigen::MatrixXd Standardise(const Eigen::MatrixXd& points);

// s(i,k) = -||x_i - x_k||^2, with zeros on the diagonal.
Eigen::MatrixXd NegSquaredEuclidean(const Eigen::MatrixXd& points);

// Median of the off-diagonal entries of a symmetric similarity matrix
// (average of the two central values for an even count). Requires n >= 2.
double MedianOffDiagonal(const Eigen::MatrixXd& similarity);

// Frey & Dueck message passing with damped responsibility/availability
// updates. Points are rows of `points`; at least one row is required.
Clustering AffinityPropagation(const Eigen::MatrixXd& points,
                               const ApConfig& config = {});

// Same, on a precomputed similarity matrix whose diagonal is ignored and
// replaced by the configured (or median) preference.
Clustering AffinityPropagationFromSimilarity(const Eigen::MatrixXd& similarity,
                                             const ApConfig& config = {});

// Sum of exemplar preferences plus the similarity of every other point to
// the exemplar of its cluster.
double NetSimilarity(const Eigen::MatrixXd& similarity, double preference,
                     const Clustering& clustering);

}  // namespace lscd

#endif  // LSCD_CLUSTERING_H_
