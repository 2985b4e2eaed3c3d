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

#include "lscd/usage.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <utility>

#include "lscd/error.h"

namespace lscd {
namespace {

// Uniform integer in [0, bound) by rejection on the raw 64-bit engine output.
std::uint64_t UniformBelow(std::mt19937_64& engine, std::uint64_t bound) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do {
    draw = engine();
  } while (draw >= limit);
  return draw % bound;
}

}  // namespace

std::string_view PeriodName(Period period) {
  return period == Period::kT1 ? "t1" : "t2";
}

UsageTensor::UsageTensor(std::string word, Period period,
                         std::size_t occurrences, std::size_t layers,
                         std::size_t dim, std::vector<float> data)
    : word_(std::move(word)),
      period_(period),
      occurrences_(occurrences),
      layers_(layers),
      dim_(dim),
      data_(std::move(data)) {
  if (layers_ == 0) throw Error("usage tensor must have at least one layer");
  if (dim_ == 0) throw Error("usage tensor must have dim >= 1");
  if (data_.size() != occurrences_ * layers_ * dim_) {
    throw Error("usage tensor for '" + word_ + "' holds " +
                std::to_string(data_.size()) + " values, expected " +
                std::to_string(occurrences_ * layers_ * dim_));
  }
  for (float v : data_) {
    if (!std::isfinite(v)) {
      throw Error("usage tensor for '" + word_ + "' contains non-finite value");
    }
  }
}

UsageTensor UsageTensor::Empty(std::string word, Period period,
                               std::size_t layers, std::size_t dim) {
  return UsageTensor(std::move(word), period, 0, layers, dim, {});
}

std::string_view LayerStrategyName(LayerStrategy strategy) {
  switch (strategy) {
    case LayerStrategy::kTopLayer:
      return "top";
    case LayerStrategy::kAverageAll:
      return "all";
    case LayerStrategy::kAverageTop4:
      return "top4";
  }
  return "?";
}

LayerStrategy ParseLayerStrategy(std::string_view name) {
  if (name == "top") return LayerStrategy::kTopLayer;
  if (name == "all") return LayerStrategy::kAverageAll;
  if (name == "top4") return LayerStrategy::kAverageTop4;
  throw Error("unknown layer strategy '" + std::string(name) +
              "' (expected top, all or top4)");
}

UsageMatrix AggregateLayers(const UsageTensor& tensor, LayerStrategy strategy) {
  const std::size_t n = tensor.occurrences();
  const std::size_t layers = tensor.layers();
  const std::size_t dim = tensor.dim();

  std::size_t first = 0;
  switch (strategy) {
    case LayerStrategy::kTopLayer:
      first = layers - 1;
      break;
    case LayerStrategy::kAverageAll:
      first = 0;
      break;
    case LayerStrategy::kAverageTop4:
      if (layers < 4) {
        throw Error("top4 layer averaging needs at least 4 layers, '" +
                    tensor.word() + "' has " + std::to_string(layers));
      }
      first = layers - 4;
      break;
  }
  const double count = static_cast<double>(layers - first);

  UsageMatrix out{tensor.word(), tensor.period(),
                  Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                        static_cast<Eigen::Index>(dim))};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = first; l < layers; ++l) {
      for (std::size_t d = 0; d < dim; ++d) {
        out.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) +=
            static_cast<double>(tensor.at(i, l, d));
      }
    }
  }
  if (count > 1) out.data /= count;
  return out;
}

UsageMatrix Subsample(const UsageMatrix& matrix, std::size_t cap,
                      std::uint64_t seed) {
  if (cap == 0) throw Error("subsample cap must be >= 1");
  const std::size_t n = matrix.rows();
  if (n <= cap) return matrix;

  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 engine(seq);

  std::vector<std::size_t> index(n);
  std::iota(index.begin(), index.end(), std::size_t{0});
  for (std::size_t i = 0; i < cap; ++i) {
    const std::size_t j = i + UniformBelow(engine, n - i);
    std::swap(index[i], index[j]);
  }
  index.resize(cap);
  std::sort(index.begin(), index.end());

  UsageMatrix out{matrix.word, matrix.period,
                  Eigen::MatrixXd(static_cast<Eigen::Index>(cap),
                                  matrix.data.cols())};
  for (std::size_t r = 0; r < cap; ++r) {
    out.data.row(static_cast<Eigen::Index>(r)) =
        matrix.data.row(static_cast<Eigen::Index>(index[r]));
  }
  return out;
}

std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view word,
                         Period period) {
  // FNV-1a over the word, mixed with the run seed and period.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : word) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  h ^= seed + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= period == Period::kT1 ? 0x1ULL : 0x2ULL;
  return h;
}

}  // namespace lscd
