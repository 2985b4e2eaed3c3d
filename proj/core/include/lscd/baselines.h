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

#ifndef LSCD_BASELINES_H_
#define LSCD_BASELINES_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "lscd/change_metrics.h"

namespace lscd {

// Tokenised sentences of one period. Files are UTF-8, one sentence per line,
// tokens separated by whitespace.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<std::vector<std::string>> sentences);

  static Corpus Load(const std::filesystem::path& path);
  static Corpus FromText(std::string_view text);

  const std::vector<std::vector<std::string>>& sentences() const {
    return sentences_;
  }
  std::size_t token_count() const { return token_count_; }
  std::size_t Count(std::string_view word) const;
  // Distinct tokens, sorted.
  std::vector<std::string> Vocabulary() const;

 private:
  std::vector<std::vector<std::string>> sentences_;
  std::size_t token_count_ = 0;
};

// Pre-trained static vectors. Text format: a "V D" header line, then V lines
// of a token followed by D decimal values.
struct StaticEmbeddings {
  std::vector<std::string> words;
  std::unordered_map<std::string, std::size_t> index;
  Eigen::MatrixXd matrix;  // V x D

  static StaticEmbeddings Load(const std::filesystem::path& path);
  static StaticEmbeddings FromRows(std::vector<std::string> words,
                                   Eigen::MatrixXd matrix);

  std::optional<std::size_t> Find(std::string_view word) const;
};

// |count(w, c1)/|c1| - count(w, c2)/|c2||.
ChangeScores FreqDiff(const Corpus& c1, const Corpus& c2,
                      const std::vector<std::string>& targets);

// targets x context_vocab matrix of co-occurrence counts within a symmetric
// window of `window` tokens that never crosses a sentence boundary.
Eigen::MatrixXd CountVectors(const Corpus& corpus, std::size_t window,
                             const std::vector<std::string>& context_vocab,
                             const std::vector<std::string>& targets);

inline constexpr std::size_t kDefaultCountWindow = 10;

// Count vectors over each corpus's vocabulary, restricted to the shared
// context words, compared by cosine distance. Words that cannot be scored
// (absent target, empty intersection) carry a NaN value and a note.
ChangeScores CntCiCd(const Corpus& c1, const Corpus& c2,
                     const std::vector<std::string>& targets,
                     std::size_t window = kDefaultCountWindow);

struct ProcrustesResult {
  Eigen::MatrixXd rotation;  // D x D orthogonal
  // Set when A^T B is rank deficient and the rotation is not unique.
  bool degenerate = false;
};

// Orthogonal Q minimising ||A Q - B||_F, from the SVD of A^T B.
ProcrustesResult OrthogonalProcrustes(const Eigen::MatrixXd& a,
                                      const Eigen::MatrixXd& b);

// Aligns e1 onto e2 with a rotation fitted on the shared vocabulary (rows
// mean-centred, then length-normalised) and scores 1 - cos(e1(w) Q, e2(w)).
ChangeScores ProcrustesCosine(const StaticEmbeddings& e1,
                              const StaticEmbeddings& e2,
                              const std::vector<std::string>& targets);

}  // namespace lscd

#endif  // LSCD_BASELINES_H_
