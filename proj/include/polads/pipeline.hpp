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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "polads/corpus.hpp"
#include "polads/evaluation.hpp"
#include "polads/gbdt.hpp"
#include "polads/grid_search.hpp"
#include "polads/naive_bayes.hpp"
#include "polads/sparse.hpp"
#include "polads/targeting.hpp"
#include "polads/text.hpp"
#include "polads/tfidf.hpp"

namespace polads {

enum class SystemKind { kMnb, kGbmText, kGbmTextTargets };

std::string_view SystemKindName(SystemKind kind);
// Accepts "mnb", "gbm-text" and "gbm-text+targets".
SystemKind ParseSystemKind(std::string_view name);

// Everything a run depends on. Serialised as a flat JSON object whose keys are
// listed in README.md; unknown keys are rejected.
struct RunConfig {
  static constexpr int kSchemaVersion = 1;

  std::uint64_t seed = 42;
  double test_fraction = 0.2;
  VectorizerConfig vectorizer{2, 2};
  std::string stop_words;  // path to a stop list; empty = bundled English list
  double mnb_alpha = 1.0;
  bool mnb_reweight_priors = false;
  GbdtParams gbdt;  // gbdt.seed is derived from `seed`
  bool grid = false;
  GridSpec grid_spec;
  int cv_folds = 5;
  int bootstrap_samples = 1000;
  double bootstrap_alpha = 0.05;
  ResampleUnit resample_unit = ResampleUnit::kAdvertisers;
  int threads = 1;
  std::size_t stats_top_k = 10;
  std::size_t top_k_keywords = 10;
  std::size_t top_k_targets = 15;

  std::string ToJson() const;
  // Missing keys keep their defaults. Throws Error(kBadConfig).
  static RunConfig FromJson(std::string_view text);
  static RunConfig Load(const std::filesystem::path& path);

  // Seeds for the independent random streams of a run.
  std::uint64_t SplitSeed() const { return seed; }
  std::uint64_t FoldSeed() const;
  std::uint64_t BoostSeed() const;
  std::uint64_t BootstrapSeed() const;

  BootstrapOptions Bootstrap() const;
};

// Text (and optionally targeting) featurisation fitted on a training set.
// Text columns come first, targeting columns follow.
class FeaturePipeline {
 public:
  FeaturePipeline() = default;

  static FeaturePipeline Fit(const Dataset& train, SystemKind kind, const RunConfig& config);

  SparseVector Transform(const AdRecord& record) const;
  SparseMatrix Transform(const Dataset& data) const;

  std::size_t text_dim() const { return vectorizer_.dim(); }
  std::size_t dim() const { return text_dim() + (encoder_ ? encoder_->dim() : 0); }
  std::vector<std::string> FeatureNames() const;

  const TfIdfVectorizer& vectorizer() const { return vectorizer_; }
  const std::optional<TargetEncoder>& encoder() const { return encoder_; }
  const std::string& stop_words_text() const { return stop_words_text_; }

  static FeaturePipeline FromParts(TfIdfVectorizer vectorizer, std::optional<TargetEncoder> encoder,
                                   std::string stop_words_text);

 private:
  TfIdfVectorizer vectorizer_;
  std::optional<TargetEncoder> encoder_;
  std::string stop_words_text_;
  StopList stop_words_;
};

struct TrainedSystem {
  SystemKind kind = SystemKind::kGbmTextTargets;
  RunConfig config;
  FeaturePipeline features;
  std::variant<MnbModel, GbdtEnsemble> model;
  std::optional<GridSearchResult> grid;

  // P(Political) per ad.
  std::vector<double> Score(const Dataset& data) const;
  // Political when the score is at least 0.5.
  std::vector<Label> Predict(const Dataset& data) const;
  const GbdtEnsemble* gbdt() const { return std::get_if<GbdtEnsemble>(&model); }
};

// Fits features and the model on `train`. GBDT systems use inverse-frequency
// class weights and, when config.grid is set, grouped k-fold grid search first.
TrainedSystem TrainSystem(const Dataset& train, SystemKind kind, const RunConfig& config);

// Adapter for the paired bootstrap; retrains from scratch on every call with
// grid search disabled.
TrainableSystem MakeTrainableSystem(SystemKind kind, RunConfig config, std::string name = {});

// Where a bundle came from; checked before evaluation.
struct BundleInfo {
  std::string dataset_fingerprint;
  std::size_t train_ads = 0;
  std::size_t test_ads = 0;
};

struct Bundle {
  TrainedSystem system;
  BundleInfo info;
};

// Files: manifest.json, config.json, vectorizer.json, stop_words.txt,
// encoder.json (targeting systems), model.json, grid.json (grid runs) and
// run_metadata.json (wall-clock time; the only non-reproducible file).
// Refuses a non-empty directory unless `force`.
void SaveBundle(const Bundle& bundle, const std::filesystem::path& dir, bool force);
Bundle LoadBundle(const std::filesystem::path& dir);

// Train/test datasets for a config, split by advertiser.
struct PartitionedDataset {
  Dataset train;
  Dataset test;
  SplitPlan plan;
};
PartitionedDataset Partition(const Dataset& dataset, const RunConfig& config);

std::vector<Label> Labels(const Dataset& data);
std::vector<std::string> Advertisers(const Dataset& data);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace polads
