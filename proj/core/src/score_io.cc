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

#include "lscd/score_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lscd/error.h"

namespace lscd {
namespace fs = std::filesystem;
namespace {

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find('\t', start);
    fields.push_back(line.substr(start, end == std::string::npos ? std::string::npos
                                                                 : end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return fields;
}

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool IsBlank(const std::string& line) { return Trim(line).empty(); }

double ParseNumber(const std::string& field, const std::string& source,
                   std::size_t line_no) {
  const std::string s = Trim(field);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() ||
      !std::isfinite(value)) {
    throw Error(source + ":" + std::to_string(line_no) + ": invalid number '" +
                field + "'");
  }
  return value;
}

}  // namespace

std::string FormatScore(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

ChangeScores RankedScores(const ChangeScores& scores) {
  ChangeScores ranked;
  for (const auto& s : scores) {
    if (s.ok()) ranked.push_back(s);
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const ChangeScore& a, const ChangeScore& b) {
              if (a.value != b.value) return a.value > b.value;
              return a.word < b.word;
            });
  return ranked;
}

std::string ScoreTsv(const ChangeScores& scores) {
  std::string out;
  for (const auto& s : RankedScores(scores)) {
    out += s.word;
    out += '\t';
    out += FormatScore(s.value);
    out += '\n';
  }
  return out;
}

void WriteScoreTsv(const fs::path& path, const ChangeScores& scores) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << ScoreTsv(scores);
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

WordScores ParseWordScores(const std::string& text, const std::string& source) {
  WordScores scores;
  const auto lines = Lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (IsBlank(lines[i])) continue;
    const auto fields = SplitTabs(lines[i]);
    if (fields.size() != 2) {
      throw Error(source + ":" + std::to_string(line_no) +
                  ": expected 'word<TAB>score', got '" + lines[i] + "'");
    }
    const std::string word = Trim(fields[0]);
    if (word.empty()) {
      throw Error(source + ":" + std::to_string(line_no) + ": empty word");
    }
    const double value = ParseNumber(fields[1], source, line_no);
    if (!scores.emplace(word, value).second) {
      throw Error(source + ":" + std::to_string(line_no) + ": duplicate word '" +
                  word + "'");
    }
  }
  return scores;
}

WordScores ReadWordScores(const fs::path& path) {
  return ParseWordScores(ReadFile(path), path.string());
}

std::vector<std::string> ReadWordList(const fs::path& path) {
  std::vector<std::string> words;
  for (const auto& line : Lines(ReadFile(path))) {
    std::string word = Trim(SplitTabs(line).front());
    if (!word.empty()) words.push_back(std::move(word));
  }
  return words;
}

std::vector<MedianPerformanceEntry> ReadMedianPerformanceEntries(
    const fs::path& path) {
  std::vector<MedianPerformanceEntry> entries;
  const auto lines = Lines(ReadFile(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (IsBlank(lines[i])) continue;
    const auto fields = SplitTabs(lines[i]);
    if (fields.size() != 3) {
      throw Error(path.string() + ":" + std::to_string(i + 1) +
                  ": expected 'testset<TAB>gold_median<TAB>performance'");
    }
    entries.push_back({Trim(fields[0]),
                       ParseNumber(fields[1], path.string(), i + 1),
                       ParseNumber(fields[2], path.string(), i + 1)});
  }
  return entries;
}

}  // namespace lscd
