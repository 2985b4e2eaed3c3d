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

#include "lscd/clustering.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "lscd/error.h"

namespace lscd {
namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Uniform double in [-1, 1) from the top 53 bits of the engine output.
double SignedUnit(std::mt19937_64& engine) {
  const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

bool AllOffDiagonalEqual(const RowMatrix& s) {
  const Eigen::Index n = s.rows();
  if (n < 2) return true;
  const double first = s(0, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (i != k && s(i, k) != first) return false;
    }
  }
  return true;
}

int ArgmaxOverColumns(const RowMatrix& s, Eigen::Index row,
                      const std::vector<int>& columns) {
  int best = 0;
  double best_value = kNegInf;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const double v = s(row, columns[c]);
    if (v > best_value) {
      best_value = v;
      best = static_cast<int>(c);
    }
  }
  return best;
}

// Numbers clusters by ascending exemplar index.
Clustering Canonicalise(std::vector<int> exemplars, const RowMatrix& s) {
  std::sort(exemplars.begin(), exemplars.end());
  const Eigen::Index n = s.rows();
  Clustering out;
  out.labels.assign(static_cast<std::size_t>(n), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.labels[i] = ArgmaxOverColumns(s, i, exemplars);
  }
  for (std::size_t k = 0; k < exemplars.size(); ++k) {
    out.labels[exemplars[k]] = static_cast<int>(k);
  }
  out.exemplars = std::move(exemplars);
  out.n_clusters = static_cast<int>(out.exemplars.size());
  return out;
}

Clustering SingleCluster(const RowMatrix& s) {
  const Eigen::Index n = s.rows();
  Eigen::Index best = 0;
  double best_sum = kNegInf;
  for (Eigen::Index k = 0; k < n; ++k) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != k) sum += s(i, k);
    }
    if (sum > best_sum) {
      best_sum = sum;
      best = k;
    }
  }
  Clustering out;
  out.labels.assign(static_cast<std::size_t>(n), 0);
  out.exemplars = {static_cast<int>(best)};
  out.n_clusters = 1;
  return out;
}

Clustering RunMessagePassing(RowMatrix s, double preference, double damping,
                             bool tie_noise, const ApConfig& config) {
  const Eigen::Index n = s.rows();
  for (Eigen::Index i = 0; i < n; ++i) s(i, i) = preference;

  if (n == 1 || AllOffDiagonalEqual(s)) {
    // Identical similarities give no signal to pass; the preference alone
    // decides between one cluster and all singletons.
    Clustering out;
    if (n > 1 && preference > s(0, 1)) {
      std::vector<int> all(static_cast<std::size_t>(n));
      for (Eigen::Index i = 0; i < n; ++i) all[i] = static_cast<int>(i);
      out = Canonicalise(std::move(all), s);
    } else {
      out = SingleCluster(s);
    }
    out.converged = true;
    out.preference = preference;
    out.damping = damping;
    return out;
  }

  if (tie_noise) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.tie_noise_seed),
                      static_cast<std::uint32_t>(config.tie_noise_seed >> 32)};
    std::mt19937_64 engine(seq);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < n; ++k) {
        s(i, k) += 1e-12 * std::abs(s(i, k)) * SignedUnit(engine);
      }
    }
  }

  RowMatrix r = RowMatrix::Zero(n, n);
  RowMatrix a = RowMatrix::Zero(n, n);
  Eigen::VectorXd column_sum(n);

  // Ring buffer of exemplar indicators over the last convergence window.
  const int window = config.convergence_iterations;
  std::vector<std::vector<char>> history(
      static_cast<std::size_t>(window),
      std::vector<char>(static_cast<std::size_t>(n), 0));
  std::vector<char> is_exemplar(static_cast<std::size_t>(n), 0);

  bool converged = false;
  int it = 0;
  for (; it < config.max_iterations; ++it) {
    // Responsibilities.
    for (Eigen::Index i = 0; i < n; ++i) {
      double best = kNegInf;
      double second = kNegInf;
      Eigen::Index best_k = 0;
      for (Eigen::Index k = 0; k < n; ++k) {
        const double v = a(i, k) + s(i, k);
        if (v > best) {
          second = best;
          best = v;
          best_k = k;
        } else if (v > second) {
          second = v;
        }
      }
      for (Eigen::Index k = 0; k < n; ++k) {
        const double update = s(i, k) - (k == best_k ? second : best);
        r(i, k) = damping * r(i, k) + (1.0 - damping) * update;
      }
    }

    // Availabilities.
    column_sum.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < n; ++k) {
        column_sum(k) += (i == k) ? r(i, k) : std::max(r(i, k), 0.0);
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < n; ++k) {
        const double own = (i == k) ? r(i, k) : std::max(r(i, k), 0.0);
        double update = column_sum(k) - own;
        if (i != k) update = std::min(update, 0.0);
        a(i, k) = damping * a(i, k) + (1.0 - damping) * update;
      }
    }

    int n_exemplars = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
      is_exemplar[k] = (a(k, k) + r(k, k)) > 0.0;
      n_exemplars += is_exemplar[k];
    }
    history[static_cast<std::size_t>(it % window)] = is_exemplar;

    if (it + 1 >= window && n_exemplars > 0) {
      bool stable = true;
      for (Eigen::Index k = 0; k < n && stable; ++k) {
        for (const auto& past : history) {
          if (past[k] != is_exemplar[k]) {
            stable = false;
            break;
          }
        }
      }
      if (stable) {
        converged = true;
        ++it;
        break;
      }
    }
  }

  std::vector<int> exemplars;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (is_exemplar[k]) exemplars.push_back(static_cast<int>(k));
  }

  Clustering out;
  if (!converged || exemplars.empty()) {
    out = SingleCluster(s);
    out.converged = false;
  } else {
    // Assign, then move each exemplar to the member with the largest summed
    // similarity to the rest of its cluster, then reassign.
    Clustering initial = Canonicalise(exemplars, s);
    std::vector<int> refined(initial.exemplars.size());
    for (int c = 0; c < initial.n_clusters; ++c) {
      std::vector<int> members;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (initial.labels[i] == c) members.push_back(static_cast<int>(i));
      }
      int best = members.front();
      double best_sum = kNegInf;
      for (int candidate : members) {
        double sum = 0.0;
        for (int m : members) sum += s(m, candidate);
        if (sum > best_sum) {
          best_sum = sum;
          best = candidate;
        }
      }
      refined[c] = best;
    }
    out = Canonicalise(std::move(refined), s);
    out.converged = true;
  }
  out.iterations = it;
  out.preference = preference;
  out.damping = damping;
  out.tie_noise = tie_noise;
  return out;
}

}  // namespace

void ApConfig::Validate() const {
  auto check = [](double d) {
    if (!(d >= 0.5 && d < 1.0)) {
      throw Error("affinity propagation damping must be in [0.5, 1), got " +
                  std::to_string(d));
    }
  };
  check(damping);
  for (double d : retry_damping) check(d);
  if (convergence_iterations < 1) {
    throw Error("convergence_iterations must be >= 1");
  }
  if (max_iterations < convergence_iterations) {
    throw Error("max_iterations must be >= convergence_iterations");
  }
  if (preference && !std::isfinite(*preference)) {
    throw Error("preference must be finite");
  }
}

Eigen::MatrixXd Standardise(const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd out(n, points.cols());
  if (n == 0) return out;
  for (Eigen::Index c = 0; c < points.cols(); ++c) {
    const double mean = points.col(c).mean();
    const Eigen::ArrayXd centred = points.col(c).array() - mean;
    const double stddev = std::sqrt(centred.square().sum() / static_cast<double>(n));
    // Rounding leaves a residue of order eps * |x| on constant columns.
    const double scale = points.col(c).cwiseAbs().maxCoeff();
    if (stddev <= 1e-12 * scale) {
      out.col(c).setZero();
    } else {
      out.col(c) = centred / stddev;
    }
  }
  return out;
}

Eigen::MatrixXd NegSquaredEuclidean(const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = i + 1; k < n; ++k) {
      const double d = (points.row(i) - points.row(k)).squaredNorm();
      s(i, k) = -d;
      s(k, i) = -d;
    }
  }
  return s;
}

double MedianOffDiagonal(const Eigen::MatrixXd& similarity) {
  const Eigen::Index n = similarity.rows();
  if (n < 2) throw Error("median similarity needs at least two points");
  // For a symmetric matrix the median of the upper triangle equals the median
  // of all off-diagonal entries.
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = i + 1; k < n; ++k) values.push_back(similarity(i, k));
  }
  const std::size_t m = values.size();
  auto mid = values.begin() + static_cast<std::ptrdiff_t>(m / 2);
  std::nth_element(values.begin(), mid, values.end());
  const double upper = *mid;
  if (m % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

Clustering AffinityPropagationFromSimilarity(const Eigen::MatrixXd& similarity,
                                             const ApConfig& config) {
  config.Validate();
  const Eigen::Index n = similarity.rows();
  if (n < 1 || similarity.cols() != n) {
    throw Error("affinity propagation needs a non-empty square similarity matrix");
  }
  double preference = 0.0;
  if (config.preference) {
    preference = *config.preference;
  } else if (n >= 2) {
    preference = MedianOffDiagonal(similarity);
  }
  const RowMatrix s(similarity);
  Clustering out =
      RunMessagePassing(s, preference, config.damping, config.tie_noise, config);
  if (out.converged || !config.retry_on_oscillation) return out;
  if (!config.tie_noise) {
    out = RunMessagePassing(s, preference, config.damping, true, config);
  }
  for (double damping : config.retry_damping) {
    if (out.converged) break;
    if (damping <= out.damping) continue;
    out = RunMessagePassing(s, preference, damping, true, config);
  }
  return out;
}

Clustering AffinityPropagation(const Eigen::MatrixXd& points,
                               const ApConfig& config) {
  if (points.rows() < 1) throw Error("affinity propagation needs at least one point");
  // Message passing sums in index order, so rounding (and, near a
  // bifurcation, the partition) would follow the input order. Clustering the
  // rows in lexicographic order makes the result a function of the point set.
  const Eigen::Index n = points.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
      if (points(a, j) != points(b, j)) return points(a, j) < points(b, j);
    }
    return false;
  });
  Eigen::MatrixXd sorted(n, points.cols());
  for (Eigen::Index p = 0; p < n; ++p) sorted.row(p) = points.row(order[p]);
  Clustering in_order =
      AffinityPropagationFromSimilarity(NegSquaredEuclidean(sorted), config);

  std::vector<int> exemplars;
  for (int e : in_order.exemplars) exemplars.push_back(static_cast<int>(order[e]));
  std::vector<int> rank(exemplars.size());
  std::iota(rank.begin(), rank.end(), 0);
  std::sort(rank.begin(), rank.end(),
            [&](int a, int b) { return exemplars[a] < exemplars[b]; });
  std::vector<int> relabel(exemplars.size());
  for (std::size_t k = 0; k < rank.size(); ++k) relabel[rank[k]] = static_cast<int>(k);

  Clustering out = in_order;
  std::sort(exemplars.begin(), exemplars.end());
  out.exemplars = std::move(exemplars);
  for (Eigen::Index p = 0; p < n; ++p) {
    out.labels[order[p]] = relabel[in_order.labels[p]];
  }
  return out;
}

double NetSimilarity(const Eigen::MatrixXd& similarity, double preference,
                     const Clustering& clustering) {
  double net = 0.0;
  for (std::size_t i = 0; i < clustering.labels.size(); ++i) {
    const int exemplar = clustering.exemplars[clustering.labels[i]];
    net += (static_cast<int>(i) == exemplar)
               ? preference
               : similarity(static_cast<Eigen::Index>(i), exemplar);
  }
  return net;
}

}  // namespace lscd
