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

#ifndef LSCD_SCORE_IO_H_
#define LSCD_SCORE_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "lscd/change_metrics.h"
#include "lscd/evaluation.h"

namespace lscd {

// Scores are written with 17 significant digits so that they re-parse to the
// same double.
std::string FormatScore(double value);

// Scored words only (ok() entries), sorted by descending score, ties by word.
ChangeScores RankedScores(const ChangeScores& scores);

// UTF-8 TSV, one "word<TAB>score" line per scored word, in RankedScores order.
void WriteScoreTsv(const std::filesystem::path& path, const ChangeScores& scores);
std::string ScoreTsv(const ChangeScores& scores);

// Reads a "word<TAB>score" file. Blank lines are skipped; anything else that
// does not split into exactly two tab-separated fields with a finite number
// is an error naming the file and line. Duplicate words are errors.
WordScores ReadWordScores(const std::filesystem::path& path);
WordScores ParseWordScores(const std::string& text, const std::string& source);

// One target per line; surrounding whitespace is trimmed and blank lines
// skipped. A trailing "<TAB>..." column (as in gold files) is ignored.
std::vector<std::string> ReadWordList(const std::filesystem::path& path);

// "testset<TAB>gold_median<TAB>performance" lines.
std::vector<MedianPerformanceEntry> ReadMedianPerformanceEntries(
    const std::filesystem::path& path);

}  // namespace lscd

#endif  // LSCD_SCORE_IO_H_
