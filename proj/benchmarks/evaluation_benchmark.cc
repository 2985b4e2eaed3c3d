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

#include <numeric>
#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "lscd/evaluation.h"

namespace lscd {
namespace {

void BM_SpearmanExact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> x(n), y(n);
  std::iota(x.begin(), x.end(), 0.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u;
  for (auto& v : y) v = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(SpearmanOfValues(x, y).p_value);
}
BENCHMARK(BM_SpearmanExact)->DenseRange(5, 9)->Unit(benchmark::kMillisecond);

void BM_SpearmanT(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> x(n), y(n);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u;
  for (auto& v : x) v = u(rng);
  for (auto& v : y) v = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(SpearmanOfValues(x, y).rho);
}
BENCHMARK(BM_SpearmanT)->Range(16, 4096);

}  // namespace
}  // namespace lscd
