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

#include <random>

#include "benchmark/benchmark.h"
#include "lscd/clustering.h"

namespace lscd {
namespace {

Eigen::MatrixXd Blobs(int per_blob, int blobs, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 0.5);
  Eigen::MatrixXd points(per_blob * blobs, 8);
  for (int b = 0; b < blobs; ++b) {
    for (int i = 0; i < per_blob; ++i) {
      for (int d = 0; d < 8; ++d) {
        points(b * per_blob + i, d) = (d == b % 8 ? 10.0 * (b + 1) : 0.0) + gauss(rng);
      }
    }
  }
  return points;
}

void BM_AffinityPropagation(benchmark::State& state) {
  const Eigen::MatrixXd points = Blobs(static_cast<int>(state.range(0)) / 4, 4, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(AffinityPropagation(points).n_clusters);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AffinityPropagation)
    ->RangeMultiplier(2)
    ->Range(64, 1024)
    ->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oNSquared);

void BM_Standardise(benchmark::State& state) {
  const Eigen::MatrixXd points = Blobs(static_cast<int>(state.range(0)) / 4, 4, 8);
  for (auto _ : state) benchmark::DoNotOptimize(Standardise(points).sum());
}
BENCHMARK(BM_Standardise)->Range(64, 4096);

}  // namespace
}  // namespace lscd
