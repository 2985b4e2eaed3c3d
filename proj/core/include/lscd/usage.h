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

#ifndef LSCD_USAGE_H_
#define LSCD_USAGE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace lscd {

enum class Period { kT1, kT2 };

std::string_view PeriodName(Period period);

// All contextualised embeddings of one word in one period, before layer
// reduction. Values are stored occurrence-major, then layer, then dimension,
// matching the on-disk layout. Layer `layers() - 1` is the top layer.
class UsageTensor {
 public:
  UsageTensor(std::string word, Period period, std::size_t occurrences,
              std::size_t layers, std::size_t dim, std::vector<float> data);

  // An empty tensor (zero occurrences) with the given shape.
  static UsageTensor Empty(std::string word, Period period, std::size_t layers,
                           std::size_t dim);

  const std::string& word() const { return word_; }
  Period period() const { return period_; }
  std::size_t occurrences() const { return occurrences_; }
  std::size_t layers() const { return layers_; }
  std::size_t dim() const { return dim_; }
  std::span<const float> data() const { return data_; }

  float at(std::size_t occurrence, std::size_t layer, std::size_t d) const {
    return data_[(occurrence * layers_ + layer) * dim_ + d];
  }

  friend bool operator==(const UsageTensor&, const UsageTensor&) = default;

 private:
  std::string word_;
  Period period_;
  std::size_t occurrences_;
  std::size_t layers_;
  std::size_t dim_;
  std::vector<float> data_;
};

// One row per occurrence, one column per embedding dimension.
struct UsageMatrix {
  std::string word;
  Period period = Period::kT1;
  Eigen::MatrixXd data;

  std::size_t rows() const { return static_cast<std::size_t>(data.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(data.cols()); }
};

enum class LayerStrategy { kTopLayer, kAverageAll, kAverageTop4 };

std::string_view LayerStrategyName(LayerStrategy strategy);
LayerStrategy ParseLayerStrategy(std::string_view name);

// Reduces an N x L x D tensor to an N x D matrix. kAverageTop4 requires at
// least four layers.
UsageMatrix AggregateLayers(const UsageTensor& tensor, LayerStrategy strategy);

// Returns `matrix` unchanged when it has at most `cap` rows, otherwise exactly
// `cap` rows drawn uniformly without replacement. Selected rows keep their
// original relative order. The draw is a partial Fisher-Yates shuffle driven
// by std::mt19937_64 seeded through std::seed_seq{seed}; bounded integers use
// rejection sampling on the raw engine output, so results are identical
// across standard libraries.
UsageMatrix Subsample(const UsageMatrix& matrix, std::size_t cap,
                      std::uint64_t seed);

// Derives a per-word, per-period seed from a run seed so that words sampled
// in parallel draw independent streams.
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view word,
                         Period period);

}  // namespace lscd

#endif  // LSCD_USAGE_H_
