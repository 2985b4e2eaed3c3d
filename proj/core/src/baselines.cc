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

#include "lscd/baselines.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "lscd/error.h"

namespace lscd {
namespace fs = std::filesystem;
namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::vector<std::string> SplitWhitespace(std::string_view line) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && IsSpace(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !IsSpace(line[j])) ++j;
    if (j > i) tokens.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

ChangeScore Unscored(const std::string& word, ScoreMethod method,
                     std::string note) {
  ChangeScore s;
  s.word = word;
  s.method = method;
  s.flagged = true;
  s.note = std::move(note);
  return s;
}

Eigen::MatrixXd CentreAndNormalise(Eigen::MatrixXd m) {
  const Eigen::RowVectorXd mean = m.colwise().mean();
  m.rowwise() -= mean;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double norm = m.row(i).norm();
    if (norm > 0.0) m.row(i) /= norm;
  }
  return m;
}

}  // namespace

Corpus::Corpus(std::vector<std::vector<std::string>> sentences)
    : sentences_(std::move(sentences)) {
  for (const auto& s : sentences_) token_count_ += s.size();
}

Corpus Corpus::FromText(std::string_view text) {
  std::vector<std::vector<std::string>> sentences;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto tokens = SplitWhitespace(text.substr(start, end - start));
    if (!tokens.empty()) sentences.push_back(std::move(tokens));
    start = end + 1;
  }
  return Corpus(std::move(sentences));
}

Corpus Corpus::Load(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return FromText(buffer.str());
}

std::size_t Corpus::Count(std::string_view word) const {
  std::size_t count = 0;
  for (const auto& s : sentences_) {
    count += static_cast<std::size_t>(std::count(s.begin(), s.end(), word));
  }
  return count;
}

std::vector<std::string> Corpus::Vocabulary() const {
  std::set<std::string> vocab;
  for (const auto& s : sentences_) vocab.insert(s.begin(), s.end());
  return {vocab.begin(), vocab.end()};
}

StaticEmbeddings StaticEmbeddings::FromRows(std::vector<std::string> words,
                                            Eigen::MatrixXd matrix) {
  if (static_cast<Eigen::Index>(words.size()) != matrix.rows()) {
    throw Error("static embeddings: word count does not match row count");
  }
  if (!matrix.allFinite()) throw Error("static embeddings: non-finite value");
  StaticEmbeddings e;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!e.index.emplace(words[i], i).second) {
      throw Error("static embeddings: duplicate word '" + words[i] + "'");
    }
  }
  e.words = std::move(words);
  e.matrix = std::move(matrix);
  return e;
}

StaticEmbeddings StaticEmbeddings::Load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embeddings '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) {
    throw Error("embeddings '" + path.string() + "': missing header");
  }
  const auto header = SplitWhitespace(line);
  std::size_t v = 0, d = 0;
  auto parse_count = [&](const std::string& s, std::size_t& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
  };
  if (header.size() != 2 || !parse_count(header[0], v) ||
      !parse_count(header[1], d) || d == 0) {
    throw Error("embeddings '" + path.string() +
                "': header must be \"V D\" with D >= 1");
  }
  std::vector<std::string> words;
  words.reserve(v);
  Eigen::MatrixXd matrix(static_cast<Eigen::Index>(v),
                         static_cast<Eigen::Index>(d));
  for (std::size_t row = 0; row < v; ++row) {
    if (!std::getline(in, line)) {
      throw Error("embeddings '" + path.string() + "': expected " +
                  std::to_string(v) + " rows, found " + std::to_string(row));
    }
    const auto fields = SplitWhitespace(line);
    if (fields.size() != d + 1) {
      throw Error("embeddings '" + path.string() + "' line " +
                  std::to_string(row + 2) + ": expected " +
                  std::to_string(d + 1) + " fields, found " +
                  std::to_string(fields.size()));
    }
    words.push_back(fields[0]);
    for (std::size_t c = 0; c < d; ++c) {
      const std::string& f = fields[c + 1];
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw Error("embeddings '" + path.string() + "' line " +
                    std::to_string(row + 2) + ": bad number '" + f + "'");
      }
      matrix(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) =
          value;
    }
  }
  return FromRows(std::move(words), std::move(matrix));
}

std::optional<std::size_t> StaticEmbeddings::Find(std::string_view word) const {
  auto it = index.find(std::string(word));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

ChangeScores FreqDiff(const Corpus& c1, const Corpus& c2,
                      const std::vector<std::string>& targets) {
  if (c1.token_count() == 0 || c2.token_count() == 0) {
    throw Error("frequency baseline: empty corpus");
  }
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> counts;
  for (const auto& t : targets) counts[t];
  for (const auto& s : c1.sentences()) {
    for (const auto& tok : s) {
      if (auto it = counts.find(tok); it != counts.end()) ++it->second.first;
    }
  }
  for (const auto& s : c2.sentences()) {
    for (const auto& tok : s) {
      if (auto it = counts.find(tok); it != counts.end()) ++it->second.second;
    }
  }
  const double n1 = static_cast<double>(c1.token_count());
  const double n2 = static_cast<double>(c2.token_count());
  ChangeScores out;
  out.reserve(targets.size());
  for (const auto& t : targets) {
    const auto [k1, k2] = counts.at(t);
    ChangeScore s;
    s.word = t;
    s.method = ScoreMethod::kFrequency;
    s.value = std::abs(static_cast<double>(k1) / n1 -
                       static_cast<double>(k2) / n2);
    out.push_back(std::move(s));
  }
  return out;
}

Eigen::MatrixXd CountVectors(const Corpus& corpus, std::size_t window,
                             const std::vector<std::string>& context_vocab,
                             const std::vector<std::string>& targets) {
  if (window == 0) throw Error("count vectors: window must be >= 1");
  std::unordered_map<std::string_view, Eigen::Index> column;
  for (std::size_t c = 0; c < context_vocab.size(); ++c) {
    column.emplace(context_vocab[c], static_cast<Eigen::Index>(c));
  }
  std::unordered_map<std::string_view, std::vector<Eigen::Index>> rows;
  for (std::size_t r = 0; r < targets.size(); ++r) {
    rows[targets[r]].push_back(static_cast<Eigen::Index>(r));
  }

  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(targets.size()),
      static_cast<Eigen::Index>(context_vocab.size()));
  for (const auto& sentence : corpus.sentences()) {
    const std::size_t m = sentence.size();
    for (std::size_t i = 0; i < m; ++i) {
      auto target = rows.find(sentence[i]);
      if (target == rows.end()) continue;
      const std::size_t lo = i >= window ? i - window : 0;
      const std::size_t hi = std::min(m - 1, i + window);
      for (std::size_t j = lo; j <= hi; ++j) {
        if (j == i) continue;
        auto col = column.find(sentence[j]);
        if (col == column.end()) continue;
        for (Eigen::Index r : target->second) counts(r, col->second) += 1.0;
      }
    }
  }
  return counts;
}

ChangeScores CntCiCd(const Corpus& c1, const Corpus& c2,
                     const std::vector<std::string>& targets,
                     std::size_t window) {
  // Restricting full-vocabulary count vectors to the shared columns is the
  // same as counting over the shared vocabulary directly.
  const std::vector<std::string> v1 = c1.Vocabulary();
  const std::vector<std::string> v2 = c2.Vocabulary();
  std::vector<std::string> shared;
  std::set_intersection(v1.begin(), v1.end(), v2.begin(), v2.end(),
                        std::back_inserter(shared));

  ChangeScores out;
  out.reserve(targets.size());
  if (shared.empty()) {
    for (const auto& t : targets) {
      out.push_back(Unscored(t, ScoreMethod::kCount, "empty column intersection"));
    }
    return out;
  }
  const Eigen::MatrixXd m1 = CountVectors(c1, window, shared, targets);
  const Eigen::MatrixXd m2 = CountVectors(c2, window, shared, targets);
  for (std::size_t r = 0; r < targets.size(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    if (m1.row(row).squaredNorm() == 0.0 || m2.row(row).squaredNorm() == 0.0) {
      out.push_back(Unscored(targets[r], ScoreMethod::kCount,
                             "zero count vector over shared context words"));
      continue;
    }
    ChangeScore s;
    s.word = targets[r];
    s.method = ScoreMethod::kCount;
    s.value = 1.0 - CosineSimilarity(m1.row(row).transpose(),
                                     m2.row(row).transpose());
    out.push_back(std::move(s));
  }
  return out;
}

ProcrustesResult OrthogonalProcrustes(const Eigen::MatrixXd& a,
                                      const Eigen::MatrixXd& b) {
  if (a.rows() < 1 || a.rows() != b.rows() || a.cols() != b.cols() ||
      a.cols() < 1) {
    throw Error("procrustes: inputs must be non-empty and share shape");
  }
  const Eigen::MatrixXd m = a.transpose() * b;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  ProcrustesResult result;
  result.rotation = svd.matrixU() * svd.matrixV().transpose();
  const auto& sv = svd.singularValues();
  const double largest = sv.size() ? sv(0) : 0.0;
  result.degenerate =
      largest == 0.0 || sv(sv.size() - 1) <= 1e-10 * largest;
  return result;
}

ChangeScores ProcrustesCosine(const StaticEmbeddings& e1,
                              const StaticEmbeddings& e2,
                              const std::vector<std::string>& targets) {
  if (e1.matrix.cols() != e2.matrix.cols()) {
    throw Error("procrustes: embedding dimensionalities differ");
  }
  std::vector<std::pair<std::size_t, std::size_t>> shared;
  for (std::size_t i = 0; i < e1.words.size(); ++i) {
    if (auto j = e2.Find(e1.words[i])) shared.emplace_back(i, *j);
  }
  if (shared.empty()) throw Error("procrustes: vocabularies do not overlap");

  Eigen::MatrixXd a(static_cast<Eigen::Index>(shared.size()), e1.matrix.cols());
  Eigen::MatrixXd b(static_cast<Eigen::Index>(shared.size()), e2.matrix.cols());
  for (std::size_t r = 0; r < shared.size(); ++r) {
    a.row(static_cast<Eigen::Index>(r)) =
        e1.matrix.row(static_cast<Eigen::Index>(shared[r].first));
    b.row(static_cast<Eigen::Index>(r)) =
        e2.matrix.row(static_cast<Eigen::Index>(shared[r].second));
  }
  const ProcrustesResult fit =
      OrthogonalProcrustes(CentreAndNormalise(std::move(a)),
                           CentreAndNormalise(std::move(b)));

  ChangeScores out;
  out.reserve(targets.size());
  for (const auto& t : targets) {
    const auto i = e1.Find(t);
    const auto j = e2.Find(t);
    if (!i || !j) {
      out.push_back(Unscored(t, ScoreMethod::kProcrustes,
                             std::string("missing from ") +
                                 (!i ? "first" : "second") + " embeddings"));
      continue;
    }
    const Eigen::VectorXd aligned =
        (e1.matrix.row(static_cast<Eigen::Index>(*i)) * fit.rotation).transpose();
    const Eigen::VectorXd other =
        e2.matrix.row(static_cast<Eigen::Index>(*j)).transpose();
    if (aligned.norm() == 0.0 || other.norm() == 0.0) {
      out.push_back(Unscored(t, ScoreMethod::kProcrustes, "zero-norm vector"));
      continue;
    }
    ChangeScore s;
    s.word = t;
    s.method = ScoreMethod::kProcrustes;
    s.value = 1.0 - CosineSimilarity(aligned, other);
    if (fit.degenerate) {
      s.flagged = true;
      s.note = "alignment rotation is not unique (rank-deficient fit)";
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace lscd
