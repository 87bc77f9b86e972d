/*
 * Copyright 2026 The polads Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// polads command line: ingest, stats, train, evaluate and explain.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "polads/corpus.hpp"
#include "polads/csv.hpp"
#include "polads/error.hpp"
#include "polads/evaluation.hpp"
#include "polads/pipeline.hpp"
#include "polads/shap.hpp"
#include "polads/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace polads {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUser = 2;

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool strict = false;
  bool force = false;
};

RunConfig EffectiveConfig(const GlobalOptions& g) {
  RunConfig config = g.config_path.empty() ? RunConfig{} : RunConfig::Load(g.config_path);
  if (g.seed) config.seed = *g.seed;
  return config;
}

Dataset LoadDataset(const std::string& path, const GlobalOptions& g) {
  return LoadCorpus(path, g.strict ? IngestPolicy::kFailFast : IngestPolicy::kSkipAndLog).dataset;
}

void PrepareOutputDir(const fs::path& dir, const std::vector<std::string>& files, bool force) {
  fs::create_directories(dir);
  if (force) return;
  for (const auto& f : files) {
    if (fs::exists(dir / f)) {
      throw Error(ErrorCode::kInvalidArgument, (dir / f).string() + " exists; pass --force to overwrite");
    }
  }
}

// ---------------------------------------------------------------------------

struct IngestArgs {
  std::string corpus;
  std::string out;
  std::string summary;
};

int RunIngest(const GlobalOptions& g, const IngestArgs& a) {
  if (!fs::exists(a.corpus)) throw Error(ErrorCode::kIo, "no such file: " + a.corpus);
  const LoadResult loaded =
      LoadCorpus(a.corpus, g.strict ? IngestPolicy::kFailFast : IngestPolicy::kSkipAndLog);
  if (!a.out.empty()) {
    if (fs::exists(a.out) && !g.force) throw Error(ErrorCode::kInvalidArgument, a.out + " exists; pass --force to overwrite");
    SaveDataset(loaded.dataset, a.out);
  }
  const std::string summary = IngestSummaryJson(loaded.summary);
  if (!a.summary.empty()) WriteFile(a.summary, summary + "\n");
  std::cout << summary << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct StatsArgs {
  std::string dataset;
  std::string out_dir;
  std::optional<std::size_t> top_k;
};

int RunStats(const GlobalOptions& g, const StatsArgs& a) {
  const RunConfig config = EffectiveConfig(g);
  const Dataset ds = LoadDataset(a.dataset, g);
  const StatsReport report = CorpusStats(ds, a.top_k.value_or(config.stats_top_k));
  const std::string report_json = StatsJson(report);
  if (!a.out_dir.empty()) {
    const fs::path dir = a.out_dir;
    PrepareOutputDir(dir, {"stats.json", "attributes.csv", "regions.csv", "interests.csv"}, g.force);
    WriteFile(dir / "stats.json", report_json + "\n");
    WriteFile(dir / "attributes.csv", AttributesCsv(report));
    WriteFile(dir / "regions.csv", RegionsCsv(report));
    WriteFile(dir / "interests.csv", InterestsCsv(report));
  }
  const json doc = json::parse(report_json);
  fmt::print("ads {}  political {}  not political {}  advertisers {}\n", doc["total_ads"].get<std::size_t>(),
             doc["political"].get<std::size_t>(), doc["not_political"].get<std::size_t>(),
             doc["advertisers"].get<std::size_t>());
  if (!doc["political_ratio"].is_null()) {
    fmt::print("political : not political = {:.2f} : 1\n", doc["political_ratio"].get<double>());
  }
  fmt::print("\n{:<40} {:>8} {:>10}\n", "attribute", "ads", "political");
  for (const auto& row : doc["attributes"]) {
    fmt::print("{:<40} {:>8} {:>10}\n", row["name"].get<std::string>(), row["ads"].get<std::size_t>(),
               row["political_ads"].get<std::size_t>());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string dataset;
  std::string system = "gbm-text+targets";
  std::string out;
  std::optional<bool> grid;
};

int RunTrain(const GlobalOptions& g, const TrainArgs& a) {
  RunConfig config = EffectiveConfig(g);
  if (a.grid) config.grid = *a.grid;
  const SystemKind kind = ParseSystemKind(a.system);
  if (fs::exists(a.out) && !fs::is_empty(a.out) && !g.force) {
    throw Error(ErrorCode::kInvalidArgument, a.out + " exists; pass --force to overwrite");
  }
  const Dataset ds = LoadDataset(a.dataset, g);
  const PartitionedDataset parts = Partition(ds, config);
  Bundle bundle;
  bundle.system = TrainSystem(parts.train, kind, config);
  bundle.info = {ds.Fingerprint(), parts.train.size(), parts.test.size()};
  SaveBundle(bundle, a.out, g.force);
  fmt::print("trained {} on {} ads ({} advertisers); {} features; bundle {}\n", a.system, parts.train.size(),
             parts.train.advertisers().size(), bundle.system.features.dim(), a.out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

enum class SplitChoice { kTest, kTrain, kAll };

SplitChoice ParseSplit(const std::string& s) {
  if (s == "test") return SplitChoice::kTest;
  if (s == "train") return SplitChoice::kTrain;
  if (s == "all") return SplitChoice::kAll;
  throw Error(ErrorCode::kInvalidArgument, "--split must be test, train or all");
}

// The part of `ds` a bundle is evaluated on. The dataset must be the one the
// bundle was trained from so that the advertiser-disjoint split is reproduced.
Dataset SelectSplit(const Dataset& ds, const Bundle& bundle, SplitChoice split) {
  if (ds.Fingerprint() != bundle.info.dataset_fingerprint) {
    throw Error(ErrorCode::kIncompatibleBundles, "dataset differs from the one the bundle was trained on");
  }
  if (split == SplitChoice::kAll) return ds;
  PartitionedDataset parts = Partition(ds, bundle.system.config);
  return split == SplitChoice::kTest ? std::move(parts.test) : std::move(parts.train);
}

// Two bundles can be compared when they were trained on the same data with
// the same split.
void CheckCompatible(const Bundle& a, const Bundle& b, const std::string& name_a, const std::string& name_b) {
  const RunConfig& ca = a.system.config;
  const RunConfig& cb = b.system.config;
  if (a.info.dataset_fingerprint != b.info.dataset_fingerprint) {
    throw Error(ErrorCode::kIncompatibleBundles, name_a + " and " + name_b + " were trained on different datasets");
  }
  if (ca.SplitSeed() != cb.SplitSeed() || ca.test_fraction != cb.test_fraction) {
    throw Error(ErrorCode::kIncompatibleBundles, name_a + " and " + name_b + " use different train/test splits");
  }
}

// A retrainable copy of a bundle's system, using the hyper-parameters the
// bundle ended up with.
TrainableSystem Retrainable(const Bundle& bundle, const std::string& name) {
  RunConfig config = bundle.system.config;
  if (const GbdtEnsemble* model = bundle.system.gbdt()) {
    GbdtParams params = model->params;
    params.seed = config.gbdt.seed;
    config.gbdt = params;
  }
  return MakeTrainableSystem(bundle.system.kind, config, name);
}

struct EvaluateArgs {
  std::string dataset;
  std::vector<std::string> bundles;
  std::string out_dir;
  std::string split = "test";
  bool allow_train_eval = false;
  bool compare_all = false;
  std::optional<int> bootstrap_samples;
  std::optional<int> threads;
};

int RunEvaluate(const GlobalOptions& g, const EvaluateArgs& a) {
  if (a.bundles.empty()) throw Error(ErrorCode::kInvalidArgument, "at least one --bundle is required");
  if (a.bundles.size() > 2 && !a.compare_all) {
    throw Error(ErrorCode::kInvalidArgument, "more than two bundles require --compare-all");
  }
  const SplitChoice split = ParseSplit(a.split);
  if (split != SplitChoice::kTest && !a.allow_train_eval) {
    throw Error(ErrorCode::kInvalidArgument, "evaluating on training ads requires --allow-train-eval");
  }
  RunConfig config = EffectiveConfig(g);
  if (a.bootstrap_samples) config.bootstrap_samples = *a.bootstrap_samples;
  if (a.threads) config.threads = *a.threads;

  std::vector<Bundle> bundles;
  std::vector<std::string> names;
  for (const auto& path : a.bundles) {
    bundles.push_back(LoadBundle(path));
    names.push_back(fs::path(path).filename().string());
    if (names.back().empty()) names.back() = fs::path(path).parent_path().filename().string();
  }
  for (std::size_t i = 1; i < bundles.size(); ++i) CheckCompatible(bundles[0], bundles[i], names[0], names[i]);

  const Dataset ds = LoadDataset(a.dataset, g);
  const Dataset eval = SelectSplit(ds, bundles[0], split);
  const std::vector<Label> truth = Labels(eval);

  json report;
  report["split"] = a.split;
  report["ads"] = eval.size();
  report["advertisers"] = eval.advertisers().size();
  report["systems"] = json::array();
  std::string metrics_csv = CsvLine({CsvQuote("bundle"), CsvQuote("system"), CsvQuote("precision"), CsvQuote("recall"), CsvQuote("f1"),
                                         CsvQuote("tp"), CsvQuote("fp"), CsvQuote("fn"), CsvQuote("tn")});
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    const MetricsReport m = ComputeMetrics(bundles[i].system.Predict(eval), truth);
    report["systems"].push_back({{"bundle", names[i]},
                                 {"system", SystemKindName(bundles[i].system.kind)},
                                 {"metrics", json::parse(MetricsJson(m))}});
    metrics_csv += CsvLine({CsvQuote(names[i]), CsvQuote(SystemKindName(bundles[i].system.kind)), CsvNumber(m.precision),
                            CsvNumber(m.recall), CsvNumber(m.f1), std::to_string(m.tp), std::to_string(m.fp),
                            std::to_string(m.fn), std::to_string(m.tn)});
  }

  std::vector<std::pair<std::string, std::string>> delta_files;
  if (bundles.size() > 1) {
    report["comparisons"] = json::array();
    for (std::size_t i = 1; i < bundles.size(); ++i) {
      const BootstrapVerdict verdict = PairedBootstrap(ds, Retrainable(bundles[0], names[0]),
                                                       Retrainable(bundles[i], names[i]), config.Bootstrap());
      report["comparisons"].push_back(json::parse(BootstrapJson(verdict, names[0], names[i])));
      delta_files.emplace_back(fmt::format("bootstrap_{}_vs_{}.csv", names[0], names[i]), BootstrapDeltasCsv(verdict));
    }
  }

  if (!a.out_dir.empty()) {
    std::vector<std::string> files = {"report.json", "metrics.csv"};
    for (const auto& [f, unused] : delta_files) files.push_back(f);
    PrepareOutputDir(a.out_dir, files, g.force);
    WriteFile(fs::path(a.out_dir) / "report.json", report.dump(2) + "\n");
    WriteFile(fs::path(a.out_dir) / "metrics.csv", metrics_csv);
    for (const auto& [f, body] : delta_files) WriteFile(fs::path(a.out_dir) / f, body);
  }

  fmt::print("{} split: {} ads, {} advertisers\n\n", a.split, eval.size(), eval.advertisers().size());
  fmt::print("{:<24} {:<18} {:>9} {:>9} {:>9}\n", "bundle", "system", "precision", "recall", "F1");
  for (const auto& row : report["systems"]) {
    const auto& m = row["metrics"];
    fmt::print("{:<24} {:<18} {:>9.2f} {:>9.2f} {:>9.2f}{}\n", row["bundle"].get<std::string>(),
               row["system"].get<std::string>(), m["precision"].get<double>(), m["recall"].get<double>(),
               m["f1"].get<double>(), m["degenerate"].get<bool>() ? "  (degenerate)" : "");
  }
  if (report.contains("comparisons")) {
    fmt::print("\n");
    for (const auto& c : report["comparisons"]) {
      fmt::print("{} vs {}: B = {}, p = {:.4f}, {} at alpha = {}\n", c["system_a"].get<std::string>(),
                 c["system_b"].get<std::string>(), c["samples"].get<int>(), c["p_value"].get<double>(),
                 c["significant"].get<bool>() ? "significant" : "not significant", c["alpha"].get<double>());
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ExplainArgs {
  std::string dataset;
  std::string bundle;
  std::string out_dir;
  std::string split = "test";
  std::optional<std::size_t> top_k_keywords;
  std::optional<std::size_t> top_k_targets;
  bool shap_matrix = false;
  std::optional<int> threads;
};

json RankingJson(const ImportanceRanking& ranking, std::size_t requested, std::size_t samples) {
  json doc;
  doc["unit"] = "mean |SHAP| (log-odds)";
  doc["samples"] = samples;
  doc["top_k"] = requested;
  doc["features"] = json::array();
  for (std::size_t r = 0; r < ranking.entries.size(); ++r) {
    doc["features"].push_back({{"rank", r + 1},
                               {"feature", ranking.entries[r].first},
                               {"column", ranking.columns[r]},
                               {"mean_abs_shap", ranking.entries[r].second}});
  }
  return doc;
}

std::string RankingCsv(const ImportanceRanking& ranking) {
  std::string out = CsvLine({CsvQuote("rank"), CsvQuote("feature"), CsvQuote("mean_abs_shap")});
  for (std::size_t r = 0; r < ranking.entries.size(); ++r) {
    out += CsvLine({std::to_string(r + 1), CsvQuote(ranking.entries[r].first), CsvNumber(ranking.entries[r].second)});
  }
  return out;
}

int RunExplain(const GlobalOptions& g, const ExplainArgs& a) {
  const RunConfig config = EffectiveConfig(g);
  const Bundle bundle = LoadBundle(a.bundle);
  const GbdtEnsemble* model = bundle.system.gbdt();
  if (model == nullptr) {
    throw Error(ErrorCode::kUnsupportedModel, "explanations need a gradient boosted bundle, got " +
                                                  std::string(SystemKindName(bundle.system.kind)));
  }
  const SplitChoice split = ParseSplit(a.split);
  const Dataset ds = LoadDataset(a.dataset, g);
  const Dataset eval = SelectSplit(ds, bundle, split);
  if (eval.empty()) throw Error(ErrorCode::kEmptyDataset, "nothing to explain");
  const std::size_t k_words = a.top_k_keywords.value_or(config.top_k_keywords);
  const std::size_t k_targets = a.top_k_targets.value_or(config.top_k_targets);

  const FeaturePipeline& features = bundle.system.features;
  const SparseMatrix x = features.Transform(eval);
  const ShapMatrix shap = EnsembleShap(*model, x, a.threads.value_or(config.threads));
  const auto text_end = static_cast<ColumnId>(features.text_dim());
  const auto all_end = static_cast<ColumnId>(features.dim());

  const ImportanceRanking keywords = GlobalImportance(shap, k_words, 0, text_end);
  if (keywords.entries.size() < k_words) {
    spdlog::warn("only {} keywords carry attribution; fewer than the {} requested", keywords.entries.size(), k_words);
  }
  json keywords_doc = RankingJson(keywords, k_words, eval.size());
  keywords_doc["base_value"] = shap.base_value;

  ImportanceRanking targeting;
  json targeting_doc;
  if (features.encoder()) {
    targeting = GlobalImportance(shap, k_targets, text_end, all_end);
    if (targeting.entries.size() < k_targets) {
      spdlog::warn("only {} targeting features carry attribution; fewer than the {} requested",
                   targeting.entries.size(), k_targets);
    }
    targeting_doc = RankingJson(targeting, k_targets, eval.size());
  } else {
    targeting_doc = RankingJson(targeting, k_targets, eval.size());
    targeting_doc["notice"] = "bundle has no targeting features";
    std::cerr << "notice: bundle has no targeting features; targeting report is empty\n";
  }
  targeting_doc["base_value"] = shap.base_value;

  // (value, SHAP) pairs for every ranked feature and explained ad.
  std::string impacts = CsvLine({CsvQuote("feature"), CsvQuote("ad_id"), CsvQuote("value"), CsvQuote("shap")});
  for (const ImportanceRanking* ranking : {&keywords, static_cast<const ImportanceRanking*>(&targeting)}) {
    for (std::size_t r = 0; r < ranking->columns.size(); ++r) {
      const ColumnId col = ranking->columns[r];
      for (std::size_t i = 0; i < eval.size(); ++i) {
        impacts += CsvLine({CsvQuote(ranking->entries[r].first), CsvQuote(eval[i].record.id), CsvNumber(x.rows[i].Get(col)),
                            CsvNumber(shap.values[i].Get(col))});
      }
    }
  }

  std::vector<std::string> files = {"keywords.json", "keywords.csv", "targeting.json", "targeting.csv",
                                    "impacts.csv"};
  if (a.shap_matrix) files.push_back("shap_matrix.csv");
  PrepareOutputDir(a.out_dir, files, g.force);
  const fs::path dir = a.out_dir;
  WriteFile(dir / "keywords.json", keywords_doc.dump(2) + "\n");
  WriteFile(dir / "keywords.csv", RankingCsv(keywords));
  WriteFile(dir / "targeting.json", targeting_doc.dump(2) + "\n");
  WriteFile(dir / "targeting.csv", RankingCsv(targeting));
  WriteFile(dir / "impacts.csv", impacts);
  if (a.shap_matrix) {
    std::vector<std::string> header;
    for (const auto& name : shap.feature_names) header.push_back(CsvQuote(name));
    std::string body = CsvLine(header);
    std::vector<std::string> row(shap.feature_names.size());
    for (const auto& v : shap.values) {
      for (std::size_t c = 0; c < row.size(); ++c) row[c] = CsvNumber(v.Get(static_cast<ColumnId>(c)));
      body += CsvLine(row);
    }
    WriteFile(dir / "shap_matrix.csv", body);
  }

  fmt::print("top keywords\n");
  for (const auto& f : keywords_doc["features"]) {
    fmt::print("{:>3}  {:<40} {:.6f}\n", f["rank"].get<std::size_t>(), f["feature"].get<std::string>(),
               f["mean_abs_shap"].get<double>());
  }
  fmt::print("\ntop targeting attributes\n");
  for (const auto& f : targeting_doc["features"]) {
    fmt::print("{:>3}  {:<40} {:.6f}\n", f["rank"].get<std::size_t>(), f["feature"].get<std::string>(),
               f["mean_abs_shap"].get<double>());
  }
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Political ad classification: ingest, stats, train, evaluate, explain"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--config", g.config_path, "Run configuration (flat JSON)");
  app.add_option("--seed", g.seed, "Override the configured seed");
  app.add_flag("--strict", g.strict, "Fail on the first malformed input line");
  app.add_flag("--force", g.force, "Overwrite existing outputs");

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Validate, label and deduplicate a raw archive dump");
  c_ingest->add_option("corpus", ingest.corpus, "Newline-delimited JSON archive")->required();
  c_ingest->add_option("-o,--out", ingest.out, "Write the labeled dataset here");
  c_ingest->add_option("--summary", ingest.summary, "Write the ingest summary JSON here");

  StatsArgs stats;
  auto* c_stats = app.add_subcommand("stats", "Corpus and targeting statistics");
  c_stats->add_option("dataset", stats.dataset, "Ingested dataset")->required();
  c_stats->add_option("-o,--out-dir", stats.out_dir, "Directory for stats.json and CSV tables");
  c_stats->add_option("--top-k", stats.top_k, "Interest segments to list");

  TrainArgs train;
  auto* c_train = app.add_subcommand("train", "Train a system and write a model bundle");
  c_train->add_option("dataset", train.dataset, "Ingested dataset")->required();
  c_train->add_option("--system", train.system, "mnb | gbm-text | gbm-text+targets")
      ->check(CLI::IsMember({"mnb", "gbm-text", "gbm-text+targets"}));
  c_train->add_option("-o,--out", train.out, "Bundle directory")->required();
  c_train->add_flag("--grid,!--no-grid", train.grid, "Grouped cross-validated grid search first");

  EvaluateArgs eval;
  auto* c_eval = app.add_subcommand("evaluate", "Score bundles on the held-out advertisers");
  c_eval->add_option("dataset", eval.dataset, "Ingested dataset the bundles were trained on")->required();
  c_eval->add_option("-b,--bundle", eval.bundles, "Bundle directory; give two to run the paired bootstrap")
      ->required();
  c_eval->add_option("-o,--out-dir", eval.out_dir, "Directory for report.json and CSV tables");
  c_eval->add_option("--split", eval.split, "test | train | all");
  c_eval->add_flag("--allow-train-eval", eval.allow_train_eval, "Permit scoring on training ads");
  c_eval->add_flag("--compare-all", eval.compare_all, "Accept more than two bundles; each is compared with the first");
  c_eval->add_option("--bootstrap-samples", eval.bootstrap_samples, "Override bootstrap.samples");
  c_eval->add_option("--threads", eval.threads, "Override threads");

  ExplainArgs explain;
  auto* c_explain = app.add_subcommand("explain", "SHAP keyword and targeting importance");
  c_explain->add_option("dataset", explain.dataset, "Ingested dataset the bundle was trained on")->required();
  c_explain->add_option("-b,--bundle", explain.bundle, "Gradient boosted bundle")->required();
  c_explain->add_option("-o,--out-dir", explain.out_dir, "Report directory")->required();
  c_explain->add_option("--split", explain.split, "test | train | all");
  c_explain->add_option("--top-k-keywords", explain.top_k_keywords, "Keywords to report");
  c_explain->add_option("--top-k-targets", explain.top_k_targets, "Targeting features to report");
  c_explain->add_flag("--shap-matrix", explain.shap_matrix, "Also dump the dense SHAP matrix");
  c_explain->add_option("--threads", explain.threads, "Override threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUser;
  }

  try {
    if (*c_ingest) return RunIngest(g, ingest);
    if (*c_stats) return RunStats(g, stats);
    if (*c_train) return RunTrain(g, train);
    if (*c_eval) return RunEvaluate(g, eval);
    if (*c_explain) return RunExplain(g, explain);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUser;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUser;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace
}  // namespace polads

int main(int argc, char** argv) { return polads::Main(argc, argv); }
