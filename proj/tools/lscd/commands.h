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

#ifndef LSCD_TOOLS_COMMANDS_H_
#define LSCD_TOOLS_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lscd/change_metrics.h"
#include "lscd/clustering.h"
#include "lscd/usage.h"

namespace lscd::cli {

struct RunConfig {
  std::filesystem::path bundles_dir;
  std::optional<std::filesystem::path> targets;  // default: every bundle
  ScoreMethod metric = ScoreMethod::kPrt;
  PrtVariant prt_variant = PrtVariant::kInvertedSimilarity;
  LayerStrategy layer = LayerStrategy::kTopLayer;
  std::optional<std::size_t> subsample_cap;
  std::uint64_t seed = 0;
  std::filesystem::path output;
  ApConfig clustering;
  std::size_t workers = 1;

  void Validate() const;
};

struct EvaluateOptions {
  std::filesystem::path predictions;
  std::filesystem::path gold;
  std::optional<std::filesystem::path> output;  // TSV report
  std::optional<std::filesystem::path> json;    // JSON report
};

enum class BaselineKind { kFrequency, kCount, kProcrustes };

struct BaselineOptions {
  BaselineKind kind = BaselineKind::kFrequency;
  std::filesystem::path corpus1, corpus2;      // fd, count
  std::filesystem::path embeddings1, embeddings2;  // procrustes
  std::filesystem::path targets;
  std::size_t window = 10;
  std::filesystem::path output;
};

enum class AnalyzeKind { kDistributions, kMedianPerformance };

struct AnalyzeOptions {
  AnalyzeKind kind = AnalyzeKind::kDistributions;
  std::vector<std::filesystem::path> score_files;  // distributions
  std::size_t bins = 10;
  bool unit_normalise = false;
  std::optional<std::filesystem::path> entries;  // median-performance
  std::vector<std::string> gold_specs;           // NAME=PATH
  std::vector<std::string> performance_specs;    // NAME=VALUE
  std::optional<std::filesystem::path> output;
  std::optional<std::filesystem::path> json;
};

// Each command returns the process exit code; diagnostics go to `err`.
int CmdScore(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdEvaluate(const EvaluateOptions& options, std::ostream& out,
                std::ostream& err);
int CmdBaseline(const BaselineOptions& options, std::ostream& out,
                std::ostream& err);
int CmdAnalyze(const AnalyzeOptions& options, std::ostream& out,
               std::ostream& err);

// Path of the run manifest written next to a score file.
std::filesystem::path ManifestPath(const std::filesystem::path& output);

// Parses argv and dispatches to the commands above.
int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace lscd::cli

#endif  // LSCD_TOOLS_COMMANDS_H_
