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

#ifndef LSCD_TESTS_TESTING_FIXTURES_H_
#define LSCD_TESTS_TESTING_FIXTURES_H_

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lscd/usage.h"

namespace lscd::testing {

inline UsageMatrix MakeUsage(const std::vector<std::vector<double>>& rows,
                             std::string word = "w",
                             Period period = Period::kT1) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = static_cast<Eigen::Index>(rows.empty() ? 1 : rows.front().size());
  UsageMatrix u{std::move(word), period, Eigen::MatrixXd(n, d)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) u.data(i, j) = rows[i][j];
  }
  return u;
}

inline std::vector<std::vector<double>> ToRows(const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) rows[i].push_back(m(i, j));
  }
  return rows;
}

inline std::vector<std::vector<double>> RandomRows(std::mt19937_64& rng,
                                                   std::size_t n, std::size_t d) {
  std::normal_distribution<double> gauss;
  std::vector<std::vector<double>> rows(n, std::vector<double>(d));
  for (auto& row : rows) {
    for (double& v : row) v = gauss(rng);
  }
  return rows;
}

inline UsageTensor RandomTensor(std::mt19937_64& rng, std::string word,
                                Period period, std::size_t n, std::size_t layers,
                                std::size_t dim) {
  std::normal_distribution<float> gauss;
  std::vector<float> data(n * layers * dim);
  for (float& v : data) v = gauss(rng);
  return UsageTensor(std::move(word), period, n, layers, dim, std::move(data));
}

struct PlantedBlobs {
  Eigen::MatrixXd points;
  std::vector<int> truth;
};

// `blobs` clusters of `per_blob` points drawn uniformly from balls of radius
// `radius`. Centres sit on a jittered, randomly rotated regular simplex whose
// smallest pairwise distance is between `separation` and 1.25 * `separation`,
// so all centre distances are of the same order. Points live in
// max(dim, blobs) dimensions.
inline PlantedBlobs PlantBlobs(std::mt19937_64& rng, int blobs, int per_blob,
                               int dim, double radius, double separation) {
  const int space = std::max(dim, blobs);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd g(space, space);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  const Eigen::MatrixXd rotation = qr.householderQ();
  std::vector<Eigen::VectorXd> centres;
  for (int b = 0; b < blobs; ++b) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(space);
    c(b) = 1.0;
    for (int d = 0; d < space; ++d) c(d) += 0.05 * gauss(rng);
    centres.push_back(rotation * c);
  }
  double closest = blobs > 1 ? INFINITY : 1.0;
  for (int a = 0; a < blobs; ++a) {
    for (int b = a + 1; b < blobs; ++b) {
      closest = std::min(closest, (centres[a] - centres[b]).norm());
    }
  }
  const double scale = separation * (1.0 + 0.25 * unit(rng)) / closest;
  Eigen::VectorXd shift(space);
  for (int d = 0; d < space; ++d) shift(d) = 10.0 * separation * gauss(rng);

  PlantedBlobs p{Eigen::MatrixXd(blobs * per_blob, space), {}};
  for (int b = 0; b < blobs; ++b) {
    for (int i = 0; i < per_blob; ++i) {
      Eigen::VectorXd dir(space);
      for (int d = 0; d < space; ++d) dir(d) = gauss(rng);
      dir.normalize();
      const double r = radius * std::pow(unit(rng), 1.0 / space);
      p.points.row(b * per_blob + i) =
          (scale * centres[b] + shift + r * dir).transpose();
      p.truth.push_back(b);
    }
  }
  return p;
}

}  // namespace lscd::testing

#endif  // LSCD_TESTS_TESTING_FIXTURES_H_
