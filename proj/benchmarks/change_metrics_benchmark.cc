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
#include "lscd/change_metrics.h"

namespace lscd {
namespace {

UsageMatrix RandomUsage(std::size_t rows, std::size_t dim, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  UsageMatrix u{"word", Period::kT1,
                Eigen::MatrixXd(static_cast<Eigen::Index>(rows),
                                static_cast<Eigen::Index>(dim))};
  for (Eigen::Index i = 0; i < u.data.size(); ++i) u.data.data()[i] = gauss(rng);
  return u;
}

void BM_Apd(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const UsageMatrix a = RandomUsage(n, 768, 1);
  const UsageMatrix b = RandomUsage(n, 768, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Apd(a, b).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Apd)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_Prt(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const UsageMatrix a = RandomUsage(n, 768, 3);
  const UsageMatrix b = RandomUsage(n, 768, 4);
  for (auto _ : state) benchmark::DoNotOptimize(Prt(a, b).value);
}
BENCHMARK(BM_Prt)->RangeMultiplier(4)->Range(16, 4096);

void BM_JsdScore(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const UsageMatrix a = RandomUsage(n, 64, 5);
  const UsageMatrix b = RandomUsage(n, 64, 6);
  for (auto _ : state) benchmark::DoNotOptimize(JsdScore(a, b).value);
}
BENCHMARK(BM_JsdScore)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace lscd
