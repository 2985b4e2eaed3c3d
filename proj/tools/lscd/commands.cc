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

#include "commands.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "lscd/baselines.h"
#include "lscd/bundle.h"
#include "lscd/error.h"
#include "lscd/evaluation.h"
#include "lscd/parallel.h"
#include "lscd/score_io.h"
#include "lscd/version.h"

namespace lscd::cli {
namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::string Sha256File(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for hashing");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buffer(1 << 16);
  while (in) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    if (in.gcount() > 0) {
      EVP_DigestUpdate(ctx, buffer.data(), static_cast<std::size_t>(in.gcount()));
    }
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx, digest, &length);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[i]);
  }
  return hex.str();
}

Json ApConfigJson(const ApConfig& c) {
  Json j;
  j["damping"] = c.damping;
  j["max_iterations"] = c.max_iterations;
  j["convergence_iterations"] = c.convergence_iterations;
  if (c.preference) {
    j["preference"] = *c.preference;
  } else {
    j["preference"] = "median";
  }
  j["tie_noise"] = c.tie_noise;
  j["tie_noise_seed"] = c.tie_noise_seed;
  j["retry_on_oscillation"] = c.retry_on_oscillation;
  j["retry_damping"] = c.retry_damping;
  return j;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

// Flags and failures shared by every command that writes a score file.
Json ScoreDiagnostics(const ChangeScores& scores, std::ostream& err,
                      int& failures) {
  Json flagged = Json::array();
  Json failed = Json::array();
  for (const auto& s : scores) {
    if (!s.ok()) {
      failed.push_back({{"word", s.word}, {"error", s.note}});
      err << "error: " << s.word << ": " << s.note << '\n';
      ++failures;
    } else if (s.flagged) {
      flagged.push_back({{"word", s.word}, {"note", s.note}});
      err << "warning: " << s.word << ": " << s.note << '\n';
    }
  }
  return Json{{"scored", RankedScores(scores).size()},
              {"flagged", std::move(flagged)},
              {"failures", std::move(failed)}};
}

std::string ReportTsv(const EvalReport& r) {
  std::ostringstream s;
  s << "rho\tp_value\tn\tsignificant\tmethod\n"
    << FormatScore(r.rho) << '\t' << FormatScore(r.p_value) << '\t' << r.n
    << '\t' << (r.significant ? "true" : "false") << '\t'
    << PValueMethodName(r.method) << '\n';
  return s.str();
}

Json ReportJson(const EvalReport& r) {
  Json j;
  j["rho"] = r.rho;
  j["p_value"] = r.p_value;
  j["n"] = r.n;
  j["significant"] = r.significant;
  j["method"] = std::string(PValueMethodName(r.method));
  j["missing_predictions"] = r.missing_predictions;
  return j;
}

void EmitReport(const EvalReport& report,
                const std::optional<fs::path>& tsv_path,
                const std::optional<fs::path>& json_path, std::ostream& out,
                Json extra = Json::object()) {
  const std::string tsv = ReportTsv(report);
  out << tsv;
  if (tsv_path) WriteText(*tsv_path, tsv);
  if (json_path) {
    Json j = ReportJson(report);
    for (auto& [key, value] : extra.items()) j[key] = value;
    WriteText(*json_path, j.dump(2) + "\n");
  }
}

std::pair<std::string, std::string> SplitSpec(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
    throw Error("expected NAME=VALUE, got '" + spec + "'");
  }
  return {spec.substr(0, eq), spec.substr(eq + 1)};
}

ChangeScore ScoreWord(const RunConfig& config, const BundleEntry& entry) {
  auto [tensor1, tensor2] = LoadBundle(entry.dir);
  UsageMatrix u1 = AggregateLayers(tensor1, config.layer);
  UsageMatrix u2 = AggregateLayers(tensor2, config.layer);
  if (config.subsample_cap) {
    u1 = Subsample(u1, *config.subsample_cap,
                   DeriveSeed(config.seed, entry.word, Period::kT1));
    u2 = Subsample(u2, *config.subsample_cap,
                   DeriveSeed(config.seed, entry.word, Period::kT2));
  }
  switch (config.metric) {
    case ScoreMethod::kPrt:
      return Prt(u1, u2, config.prt_variant);
    case ScoreMethod::kApd:
      return Apd(u1, u2);
    case ScoreMethod::kJsd:
      return JsdScore(u1, u2, config.clustering);
    default:
      throw Error("metric must be prt, apd or jsd");
  }
}

}  // namespace

void RunConfig::Validate() const {
  if (metric != ScoreMethod::kPrt && metric != ScoreMethod::kApd &&
      metric != ScoreMethod::kJsd) {
    throw Error("metric must be prt, apd or jsd");
  }
  if (subsample_cap && *subsample_cap == 0) {
    throw Error("subsample cap must be >= 1");
  }
  if (metric == ScoreMethod::kJsd) clustering.Validate();
  if (output.empty()) throw Error("an output path is required");
}

fs::path ManifestPath(const fs::path& output) {
  fs::path p = output;
  p += ".manifest.json";
  return p;
}

int CmdScore(const RunConfig& config, std::ostream& out, std::ostream& err) {
  config.Validate();
  const std::vector<BundleEntry> available = ListBundles(config.bundles_dir);

  std::vector<BundleEntry> work;
  ChangeScores missing;
  if (config.targets) {
    std::map<std::string, fs::path> by_word;
    for (const auto& e : available) by_word.emplace(e.word, e.dir);
    for (const auto& word : ReadWordList(*config.targets)) {
      if (auto it = by_word.find(word); it != by_word.end()) {
        work.push_back({word, it->second});
      } else {
        ChangeScore s;
        s.word = word;
        s.method = config.metric;
        s.flagged = true;
        s.note = "missing bundle";
        missing.push_back(std::move(s));
      }
    }
  } else {
    work = available;
  }
  if (work.empty() && missing.empty()) {
    err << "error: no targets found in '" << config.bundles_dir.string()
        << "'\n";
    return 1;
  }

  ChangeScores scores(work.size());
  ParallelFor(work.size(), config.workers, [&](std::size_t i) {
    try {
      scores[i] = ScoreWord(config, work[i]);
      scores[i].word = work[i].word;
    } catch (const Error& e) {
      scores[i] = ChangeScore{};
      scores[i].word = work[i].word;
      scores[i].method = config.metric;
      scores[i].flagged = true;
      scores[i].note = e.what();
    }
  });
  scores.insert(scores.end(), missing.begin(), missing.end());
  std::sort(scores.begin(), scores.end(),
            [](const ChangeScore& a, const ChangeScore& b) {
              return a.word < b.word;
            });

  WriteScoreTsv(config.output, scores);

  Json inputs = Json::array();
  for (const auto& e : work) {
    inputs.push_back({{"word", e.word},
                      {"manifest_sha256", Sha256File(e.dir / kBundleManifestFile)},
                      {"t1_sha256", Sha256File(e.dir / "t1.bin")},
                      {"t2_sha256", Sha256File(e.dir / "t2.bin")}});
  }
  Json cfg;
  cfg["bundles_dir"] = config.bundles_dir.string();
  cfg["targets"] = config.targets ? Json(config.targets->string()) : Json(nullptr);
  cfg["metric"] = std::string(ScoreMethodName(config.metric));
  cfg["prt_variant"] = std::string(PrtVariantName(config.prt_variant));
  cfg["layer"] = std::string(LayerStrategyName(config.layer));
  cfg["subsample_cap"] =
      config.subsample_cap ? Json(*config.subsample_cap) : Json(nullptr);
  cfg["seed"] = config.seed;
  cfg["output"] = config.output.string();
  cfg["clustering"] = ApConfigJson(config.clustering);

  int failures = 0;
  Json manifest;
  manifest["tool"] = "lscd";
  manifest["version"] = kVersion;
  manifest["command"] = "score";
  manifest["config"] = std::move(cfg);
  manifest["inputs"] = std::move(inputs);
  manifest["result"] = ScoreDiagnostics(scores, err, failures);
  WriteText(ManifestPath(config.output), manifest.dump(2) + "\n");

  out << "scored " << (scores.size() - static_cast<std::size_t>(failures))
      << " of " << scores.size() << " words -> " << config.output.string()
      << '\n';
  return failures == 0 ? 0 : 1;
}

int CmdEvaluate(const EvaluateOptions& options, std::ostream& out,
                std::ostream& err) {
  const WordScores predicted = ReadWordScores(options.predictions);
  const WordScores gold = ReadWordScores(options.gold);
  const EvalReport report = Spearman(predicted, gold);
  for (const auto& word : report.missing_predictions) {
    err << "warning: no prediction for gold word '" << word << "'\n";
  }
  EmitReport(report, options.output, options.json, out,
             Json{{"predictions", options.predictions.string()},
                  {"gold", options.gold.string()}});
  return 0;
}

int CmdBaseline(const BaselineOptions& options, std::ostream& out,
                std::ostream& err) {
  if (options.output.empty()) throw Error("an output path is required");
  const std::vector<std::string> targets = ReadWordList(options.targets);
  if (targets.empty()) {
    err << "error: no targets found in '" << options.targets.string() << "'\n";
    return 1;
  }
  ChangeScores scores;
  Json cfg;
  Json inputs;
  switch (options.kind) {
    case BaselineKind::kFrequency:
    case BaselineKind::kCount: {
      const Corpus c1 = Corpus::Load(options.corpus1);
      const Corpus c2 = Corpus::Load(options.corpus2);
      if (options.kind == BaselineKind::kFrequency) {
        cfg["kind"] = "fd";
        scores = FreqDiff(c1, c2, targets);
      } else {
        if (options.window == 0) throw Error("window must be >= 1");
        cfg["kind"] = "count";
        cfg["window"] = options.window;
        scores = CntCiCd(c1, c2, targets, options.window);
      }
      inputs["corpus1"] = {{"path", options.corpus1.string()},
                           {"sha256", Sha256File(options.corpus1)}};
      inputs["corpus2"] = {{"path", options.corpus2.string()},
                           {"sha256", Sha256File(options.corpus2)}};
      break;
    }
    case BaselineKind::kProcrustes: {
      cfg["kind"] = "procrustes";
      scores = ProcrustesCosine(StaticEmbeddings::Load(options.embeddings1),
                                StaticEmbeddings::Load(options.embeddings2),
                                targets);
      inputs["embeddings1"] = {{"path", options.embeddings1.string()},
                               {"sha256", Sha256File(options.embeddings1)}};
      inputs["embeddings2"] = {{"path", options.embeddings2.string()},
                               {"sha256", Sha256File(options.embeddings2)}};
      break;
    }
  }
  inputs["targets"] = {{"path", options.targets.string()},
                       {"sha256", Sha256File(options.targets)}};
  cfg["output"] = options.output.string();

  WriteScoreTsv(options.output, scores);
  int failures = 0;
  Json manifest;
  manifest["tool"] = "lscd";
  manifest["version"] = kVersion;
  manifest["command"] = "baseline";
  manifest["config"] = std::move(cfg);
  manifest["inputs"] = std::move(inputs);
  manifest["result"] = ScoreDiagnostics(scores, err, failures);
  WriteText(ManifestPath(options.output), manifest.dump(2) + "\n");
  out << "scored " << (scores.size() - static_cast<std::size_t>(failures))
      << " of " << scores.size() << " words -> " << options.output.string()
      << '\n';
  return failures == 0 ? 0 : 1;
}

int CmdAnalyze(const AnalyzeOptions& options, std::ostream& out,
               std::ostream& err) {
  if (options.kind == AnalyzeKind::kDistributions) {
    if (options.score_files.empty()) throw Error("no score files given");
    std::ostringstream csv;
    csv << "file,n,median,min,max,bin,bin_lo,bin_hi,count\n";
    for (const auto& path : options.score_files) {
      const WordScores scores = ReadWordScores(path);
      std::vector<double> values;
      for (const auto& [word, v] : scores) values.push_back(v);
      if (values.empty()) throw Error("'" + path.string() + "' holds no scores");
      if (options.unit_normalise) values = UnitNormalise(values);
      const DistributionStats stats =
          ComputeDistributionStats(values, options.bins);
      for (std::size_t b = 0; b < stats.counts.size(); ++b) {
        csv << path.string() << ',' << stats.n << ','
            << FormatScore(stats.median) << ',' << FormatScore(stats.min)
            << ',' << FormatScore(stats.max) << ',' << b << ','
            << FormatScore(stats.bin_edges[b]) << ','
            << FormatScore(stats.bin_edges[b + 1]) << ',' << stats.counts[b]
            << '\n';
      }
    }
    out << csv.str();
    if (options.output) WriteText(*options.output, csv.str());
    return 0;
  }

  std::vector<MedianPerformanceEntry> entries;
  if (options.entries) {
    entries = ReadMedianPerformanceEntries(*options.entries);
  }
  if (!options.gold_specs.empty() || !options.performance_specs.empty()) {
    std::map<std::string, double> performance;
    for (const auto& spec : options.performance_specs) {
      auto [name, value] = SplitSpec(spec);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw Error("bad performance value in '" + spec + "'");
      }
      performance[name] = v;
    }
    for (const auto& spec : options.gold_specs) {
      auto [name, path] = SplitSpec(spec);
      auto it = performance.find(name);
      if (it == performance.end()) {
        throw Error("no --perf value for test set '" + name + "'");
      }
      std::vector<double> values;
      for (const auto& [word, v] : ReadWordScores(path)) values.push_back(v);
      if (values.empty()) throw Error("'" + path + "' holds no scores");
      if (options.unit_normalise) values = UnitNormalise(values);
      entries.push_back({name, Median(values), it->second});
    }
  }
  const EvalReport report = MedianPerformanceCorrelation(entries);
  Json used = Json::array();
  for (const auto& e : entries) {
    err << "test set " << e.testset << ": median " << FormatScore(e.gold_median)
        << ", performance " << FormatScore(e.performance) << '\n';
    used.push_back({{"testset", e.testset},
                    {"gold_median", e.gold_median},
                    {"performance", e.performance}});
  }
  EmitReport(report, options.output, options.json, out,
             Json{{"entries", std::move(used)}});
  return 0;
}

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Rank words by lexical semantic change between two periods"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // score
  RunConfig run;
  run.workers = DefaultWorkerCount();
  std::string metric = "prt", variant = "inverted", layer = "top";
  std::size_t cap = 0;
  std::string targets;
  double preference = 0.0;
  auto* score = app.add_subcommand("score", "Score every word bundle");
  score->add_option("--bundles", run.bundles_dir, "Directory of usage bundles")
      ->required();
  score->add_option("--targets", targets, "Restrict to the words in this file");
  score->add_option("--metric", metric, "prt, apd or jsd")
      ->check(CLI::IsMember({"prt", "apd", "jsd"}));
  score->add_option("--prt-variant", variant, "inverted or distance")
      ->check(CLI::IsMember({"inverted", "distance"}));
  score->add_option("--layer", layer, "top, all or top4")
      ->check(CLI::IsMember({"top", "all", "top4"}));
  auto* cap_opt = score->add_option("--subsample", cap,
                                    "Cap occurrences per period (>= 1)");
  score->add_option("--seed", run.seed, "Seed for subsampling");
  score->add_option("--output,-o", run.output, "Score TSV to write")->required();
  score->add_option("--workers", run.workers,
                    "Worker threads (default: $LSCD_WORKERS or all cores)");
  score->add_option("--damping", run.clustering.damping, "AP damping");
  score->add_option("--max-iter", run.clustering.max_iterations,
                    "AP maximum iterations");
  score->add_option("--convergence-iter", run.clustering.convergence_iterations,
                    "AP iterations with a stable exemplar set");
  auto* pref_opt = score->add_option("--preference", preference,
                                     "AP preference (default: median similarity)");
  score->add_flag("--tie-noise", run.clustering.tie_noise,
                  "Add seeded 1e-12 relative noise to similarities");
  score->add_option("--tie-noise-seed", run.clustering.tie_noise_seed, "Seed for tie noise");
  bool no_retry = false;
  score->add_flag("--no-oscillation-retry", no_retry,
                  "Report a non-converged AP run as is instead of retrying");
  score->add_option("--retry-damping", run.clustering.retry_damping,
                    "Damping factors tried, with tie noise, after a non-converged run")
      ->delimiter(',');

  // evaluate
  EvaluateOptions eval;
  std::string eval_output, eval_json;
  auto* evaluate = app.add_subcommand("evaluate", "Spearman correlation with gold");
  evaluate->add_option("predictions", eval.predictions, "word<TAB>score file")
      ->required();
  evaluate->add_option("gold", eval.gold, "word<TAB>score gold file")->required();
  evaluate->add_option("--output,-o", eval_output, "Write the TSV report here");
  evaluate->add_option("--json", eval_json, "Write the JSON report here");

  // baseline
  BaselineOptions base;
  auto* baseline = app.add_subcommand("baseline", "Run a comparison baseline");
  baseline->require_subcommand(1);
  auto* fd = baseline->add_subcommand("fd", "Relative frequency difference");
  auto* count = baseline->add_subcommand(
      "count", "Count vectors, column intersection, cosine distance");
  auto* procrustes = baseline->add_subcommand(
      "procrustes", "Cosine distance after orthogonal Procrustes alignment");
  for (auto* sub : {fd, count}) {
    sub->add_option("--corpus1", base.corpus1, "Period 1 corpus")->required();
    sub->add_option("--corpus2", base.corpus2, "Period 2 corpus")->required();
  }
  count->add_option("--window", base.window, "Symmetric window size");
  procrustes->add_option("--emb1", base.embeddings1, "Period 1 vectors")
      ->required();
  procrustes->add_option("--emb2", base.embeddings2, "Period 2 vectors")
      ->required();
  for (auto* sub : {fd, count, procrustes}) {
    sub->add_option("--targets", base.targets, "Target word list")->required();
    sub->add_option("--output,-o", base.output, "Score TSV to write")
        ->required();
  }

  // analyze
  AnalyzeOptions analysis;
  std::string analysis_output, analysis_json, entries;
  auto* analyze = app.add_subcommand("analyze", "Score distribution analyses");
  analyze->require_subcommand(1);
  auto* distributions = analyze->add_subcommand(
      "distributions", "Median and histogram per score file (CSV)");
  distributions->add_option("files", analysis.score_files, "Score files")
      ->required();
  distributions->add_option("--bins", analysis.bins, "Histogram bins")
      ->check(CLI::PositiveNumber);
  auto* median_perf = analyze->add_subcommand(
      "median-performance",
      "Spearman correlation between gold medians and performance");
  median_perf->add_option("--entries", entries,
                          "testset<TAB>gold_median<TAB>performance file");
  median_perf->add_option("--gold", analysis.gold_specs,
                          "NAME=PATH gold file (repeatable)");
  median_perf->add_option("--perf", analysis.performance_specs,
                          "NAME=VALUE performance (repeatable)");
  median_perf->add_option("--json", analysis_json, "Write the JSON report here");
  for (auto* sub : {distributions, median_perf}) {
    sub->add_flag("--normalise", analysis.unit_normalise,
                  "Divide scores by their maximum first");
    sub->add_option("--output,-o", analysis_output, "Write the result here");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (score->parsed()) {
      run.metric = metric == "prt"   ? ScoreMethod::kPrt
                   : metric == "apd" ? ScoreMethod::kApd
                                     : ScoreMethod::kJsd;
      run.prt_variant = ParsePrtVariant(variant);
      run.layer = ParseLayerStrategy(layer);
      if (cap_opt->count() > 0) run.subsample_cap = cap;
      if (pref_opt->count() > 0) run.clustering.preference = preference;
      if (no_retry) run.clustering.retry_on_oscillation = false;
      if (!targets.empty()) run.targets = targets;
      return CmdScore(run, out, err);
    }
    if (evaluate->parsed()) {
      if (!eval_output.empty()) eval.output = eval_output;
      if (!eval_json.empty()) eval.json = eval_json;
      return CmdEvaluate(eval, out, err);
    }
    if (baseline->parsed()) {
      base.kind = fd->parsed()      ? BaselineKind::kFrequency
                  : count->parsed() ? BaselineKind::kCount
                                    : BaselineKind::kProcrustes;
      return CmdBaseline(base, out, err);
    }
    if (analyze->parsed()) {
      analysis.kind = distributions->parsed() ? AnalyzeKind::kDistributions
                                              : AnalyzeKind::kMedianPerformance;
      if (!analysis_output.empty()) analysis.output = analysis_output;
      if (!analysis_json.empty()) analysis.json = analysis_json;
      if (!entries.empty()) analysis.entries = entries;
      return CmdAnalyze(analysis, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace lscd::cli
