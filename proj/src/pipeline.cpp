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

#include "polads/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "polads/error.hpp"
#include "polads/gbdt_json.hpp"
#include "polads/random.hpp"

namespace polads {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view SystemKindName(SystemKind kind) {
  switch (kind) {
    case SystemKind::kMnb: return "mnb";
    case SystemKind::kGbmText: return "gbm-text";
    case SystemKind::kGbmTextTargets: return "gbm-text+targets";
  }
  return "unknown";
}

SystemKind ParseSystemKind(std::string_view name) {
  if (name == "mnb") return SystemKind::kMnb;
  if (name == "gbm-text") return SystemKind::kGbmText;
  if (name == "gbm-text+targets") return SystemKind::kGbmTextTargets;
  throw Error(ErrorCode::kBadConfig, "unknown system '" + std::string(name) + "'");
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const fs::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// RunConfig

std::uint64_t RunConfig::FoldSeed() const { return DeriveSeed(seed, 1); }
std::uint64_t RunConfig::BoostSeed() const { return DeriveSeed(seed, 2); }
std::uint64_t RunConfig::BootstrapSeed() const { return DeriveSeed(seed, 3); }

BootstrapOptions RunConfig::Bootstrap() const {
  BootstrapOptions o;
  o.samples = bootstrap_samples;
  o.alpha = bootstrap_alpha;
  o.seed = BootstrapSeed();
  o.test_fraction = test_fraction;
  o.unit = resample_unit;
  o.threads = threads;
  return o;
}

std::string RunConfig::ToJson() const {
  json doc = {
      {"schema_version", kSchemaVersion},
      {"seed", seed},
      {"test_fraction", test_fraction},
      {"vectorizer.ngram_max", vectorizer.ngram_max},
      {"vectorizer.min_df", vectorizer.min_df},
      {"stop_words", stop_words},
      {"mnb.alpha", mnb_alpha},
      {"mnb.reweight_priors", mnb_reweight_priors},
      {"gbdt.n_trees", gbdt.n_trees},
      {"gbdt.max_leaves", gbdt.max_leaves},
      {"gbdt.max_depth", gbdt.max_depth},
      {"gbdt.learning_rate", gbdt.learning_rate},
      {"gbdt.min_samples_leaf", gbdt.min_samples_leaf},
      {"gbdt.min_gain", gbdt.min_gain},
      {"gbdt.lambda_l2", gbdt.lambda_l2},
      {"gbdt.feature_subsample", gbdt.feature_subsample},
      {"grid", grid},
      {"grid.n_trees", grid_spec.n_trees},
      {"grid.learning_rate", grid_spec.learning_rate},
      {"grid.max_leaves", grid_spec.max_leaves},
      {"grid.min_samples_leaf", grid_spec.min_samples_leaf},
      {"cv.folds", cv_folds},
      {"bootstrap.samples", bootstrap_samples},
      {"bootstrap.alpha", bootstrap_alpha},
      {"bootstrap.resample_unit", resample_unit == ResampleUnit::kAds ? "ads" : "advertisers"},
      {"threads", threads},
      {"stats.top_k", stats_top_k},
      {"explain.top_k_keywords", top_k_keywords},
      {"explain.top_k_targets", top_k_targets},
  };
  return doc.dump(2);
}

RunConfig RunConfig::FromJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kBadConfig, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kBadConfig, "config must be a JSON object");
  RunConfig c;
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "schema_version") {
        if (value.get<int>() > kSchemaVersion) throw Error(ErrorCode::kBadConfig, "config schema too new");
      } else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "test_fraction") c.test_fraction = value.get<double>();
      else if (key == "vectorizer.ngram_max") c.vectorizer.ngram_max = value.get<int>();
      else if (key == "vectorizer.min_df") c.vectorizer.min_df = value.get<std::size_t>();
      else if (key == "stop_words") c.stop_words = value.get<std::string>();
      else if (key == "mnb.alpha") c.mnb_alpha = value.get<double>();
      else if (key == "mnb.reweight_priors") c.mnb_reweight_priors = value.get<bool>();
      else if (key == "gbdt.n_trees") c.gbdt.n_trees = value.get<int>();
      else if (key == "gbdt.max_leaves") c.gbdt.max_leaves = value.get<int>();
      else if (key == "gbdt.max_depth") c.gbdt.max_depth = value.get<int>();
      else if (key == "gbdt.learning_rate") c.gbdt.learning_rate = value.get<double>();
      else if (key == "gbdt.min_samples_leaf") c.gbdt.min_samples_leaf = value.get<int>();
      else if (key == "gbdt.min_gain") c.gbdt.min_gain = value.get<double>();
      else if (key == "gbdt.lambda_l2") c.gbdt.lambda_l2 = value.get<double>();
      else if (key == "gbdt.feature_subsample") c.gbdt.feature_subsample = value.get<double>();
      else if (key == "grid") c.grid = value.get<bool>();
      else if (key == "grid.n_trees") c.grid_spec.n_trees = value.get<std::vector<int>>();
      else if (key == "grid.learning_rate") c.grid_spec.learning_rate = value.get<std::vector<double>>();
      else if (key == "grid.max_leaves") c.grid_spec.max_leaves = value.get<std::vector<int>>();
      else if (key == "grid.min_samples_leaf") c.grid_spec.min_samples_leaf = value.get<std::vector<int>>();
      else if (key == "cv.folds") c.cv_folds = value.get<int>();
      else if (key == "bootstrap.samples") c.bootstrap_samples = value.get<int>();
      else if (key == "bootstrap.alpha") c.bootstrap_alpha = value.get<double>();
      else if (key == "bootstrap.resample_unit") {
        const auto unit = value.get<std::string>();
        if (unit == "ads") c.resample_unit = ResampleUnit::kAds;
        else if (unit == "advertisers") c.resample_unit = ResampleUnit::kAdvertisers;
        else throw Error(ErrorCode::kBadConfig, "bootstrap.resample_unit must be ads or advertisers");
      } else if (key == "threads") c.threads = value.get<int>();
      else if (key == "stats.top_k") c.stats_top_k = value.get<std::size_t>();
      else if (key == "explain.top_k_keywords") c.top_k_keywords = value.get<std::size_t>();
      else if (key == "explain.top_k_targets") c.top_k_targets = value.get<std::size_t>();
      else throw Error(ErrorCode::kBadConfig, "unknown config key '" + key + "'");
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kBadConfig, "config key '" + key + "': " + e.what());
    }
  }
  c.gbdt.Validate();
  if (!(c.test_fraction > 0.0 && c.test_fraction < 1.0)) throw Error(ErrorCode::kBadConfig, "test_fraction must be in (0, 1)");
  if (c.vectorizer.ngram_max < 1) throw Error(ErrorCode::kBadConfig, "vectorizer.ngram_max must be >= 1");
  if (c.cv_folds < 2) throw Error(ErrorCode::kBadConfig, "cv.folds must be >= 2");
  if (c.bootstrap_samples < 1) throw Error(ErrorCode::kBadConfig, "bootstrap.samples must be >= 1");
  if (!(c.bootstrap_alpha > 0.0 && c.bootstrap_alpha < 1.0)) throw Error(ErrorCode::kBadConfig, "bootstrap.alpha must be in (0, 1)");
  return c;
}

RunConfig RunConfig::Load(const fs::path& path) { return FromJson(ReadFile(path)); }

// ---------------------------------------------------------------------------
// Features

FeaturePipeline FeaturePipeline::FromParts(TfIdfVectorizer vectorizer, std::optional<TargetEncoder> encoder,
                                           std::string stop_words_text) {
  FeaturePipeline p;
  p.vectorizer_ = std::move(vectorizer);
  p.encoder_ = std::move(encoder);
  p.stop_words_ = StopList::FromText(stop_words_text);
  p.stop_words_text_ = std::move(stop_words_text);
  return p;
}

FeaturePipeline FeaturePipeline::Fit(const Dataset& train, SystemKind kind, const RunConfig& config) {
  std::string stop_text =
      config.stop_words.empty() ? std::string(StopList::EnglishText()) : ReadFile(config.stop_words);
  const StopList stops = StopList::FromText(stop_text);

  std::vector<TokenStream> docs;
  docs.reserve(train.size());
  for (const auto& ad : train.records()) docs.push_back(TokenizeAndStem(BuildText(ad.record), stops));
  VectorizerConfig vc = config.vectorizer;
  // The baseline runs on unigrams.
  if (kind == SystemKind::kMnb) vc.ngram_max = 1;
  auto vectorizer = TfIdfVectorizer::Fit(docs, vc);

  std::optional<TargetEncoder> encoder;
  if (kind == SystemKind::kGbmTextTargets) {
    std::vector<NormalizedTargets> targets;
    targets.reserve(train.size());
    for (const auto& ad : train.records()) {
      targets.push_back(NormalizeTargets(ParseTargetsLenient(ad.record.targets_raw, ad.record.id)));
    }
    encoder = TargetEncoder::Fit(targets);
  }
  return FromParts(std::move(vectorizer), std::move(encoder), std::move(stop_text));
}

SparseVector FeaturePipeline::Transform(const AdRecord& record) const {
  SparseVector text = vectorizer_.Transform(TokenizeAndStem(BuildText(record), stop_words_));
  if (!encoder_) return text;
  return text.Concat(encoder_->Encode(NormalizeTargets(ParseTargetsLenient(record.targets_raw, record.id))));
}

SparseMatrix FeaturePipeline::Transform(const Dataset& data) const {
  SparseMatrix m;
  m.cols = dim();
  m.rows.reserve(data.size());
  for (const auto& ad : data.records()) m.rows.push_back(Transform(ad.record));
  return m;
}

std::vector<std::string> FeaturePipeline::FeatureNames() const {
  std::vector<std::string> names = vectorizer_.terms();
  if (encoder_) {
    for (auto& n : encoder_->ColumnNames()) names.push_back(std::move(n));
  }
  return names;
}

// ---------------------------------------------------------------------------
// Systems

std::vector<Label> Labels(const Dataset& data) {
  std::vector<Label> y;
  y.reserve(data.size());
  for (const auto& ad : data.records()) y.push_back(ad.label);
  return y;
}

std::vector<std::string> Advertisers(const Dataset& data) {
  std::vector<std::string> a;
  a.reserve(data.size());
  for (const auto& ad : data.records()) a.push_back(ad.record.advertiser);
  return a;
}

std::vector<double> TrainedSystem::Score(const Dataset& data) const {
  std::vector<double> scores;
  scores.reserve(data.size());
  for (const auto& ad : data.records()) {
    const SparseVector x = features.Transform(ad.record);
    if (const auto* nb = std::get_if<MnbModel>(&model)) {
      scores.push_back(PredictMnb(*nb, x));
    } else {
      scores.push_back(std::get<GbdtEnsemble>(model).PredictProba(x));
    }
  }
  return scores;
}

std::vector<Label> TrainedSystem::Predict(const Dataset& data) const {
  std::vector<Label> labels;
  for (double s : Score(data)) labels.push_back(s >= 0.5 ? Label::kPolitical : Label::kNonPolitical);
  return labels;
}

TrainedSystem TrainSystem(const Dataset& train, SystemKind kind, const RunConfig& config) {
  if (train.empty()) throw Error(ErrorCode::kEmptyTrainingSet, "no training ads");
  TrainedSystem sys;
  sys.kind = kind;
  sys.config = config;
  sys.features = FeaturePipeline::Fit(train, kind, config);
  const SparseMatrix x = sys.features.Transform(train);
  const std::vector<Label> y = Labels(train);

  if (kind == SystemKind::kMnb) {
    sys.model = TrainMnb(x, y, {config.mnb_alpha, config.mnb_reweight_priors});
    return sys;
  }
  GbdtParams params = config.gbdt;
  params.seed = config.BoostSeed();
  if (config.grid) {
    const auto grid = config.grid_spec.Expand(params);
    sys.grid = GridSearchCv(x, y, Advertisers(train), grid, config.cv_folds, config.FoldSeed());
    params = sys.grid->best;
  }
  const auto weights = SampleWeights(y, ComputeClassWeights(y));
  GbdtEnsemble model = TrainGbdt(x, y, weights, params);
  model.feature_names = sys.features.FeatureNames();
  sys.model = std::move(model);
  return sys;
}

TrainableSystem MakeTrainableSystem(SystemKind kind, RunConfig config, std::string name) {
  config.grid = false;
  TrainableSystem system;
  system.name = name.empty() ? std::string(SystemKindName(kind)) : std::move(name);
  system.train = [kind, config](const Dataset& train) -> TrainableSystem::Predictor {
    auto trained = std::make_shared<const TrainedSystem>(TrainSystem(train, kind, config));
    return [trained](const Dataset& test) { return trained->Predict(test); };
  };
  return system;
}

PartitionedDataset Partition(const Dataset& dataset, const RunConfig& config) {
  const DatasetSplit split = SplitByAdvertiser(dataset, config.test_fraction, config.SplitSeed());
  return {dataset.Subset(split.train), dataset.Subset(split.test), split.plan};
}

// ---------------------------------------------------------------------------
// Bundles

namespace {

constexpr std::string_view kBundleFormat = "1.0";

}  // namespace

void SaveBundle(const Bundle& bundle, const fs::path& dir, bool force) {
  if (fs::exists(dir) && !fs::is_empty(dir) && !force) {
    throw Error(ErrorCode::kInvalidArgument, dir.string() + " exists; pass --force to overwrite");
  }
  if (fs::exists(dir) && force) {
    for (const char* name : {"encoder.json", "grid.json"}) fs::remove(dir / name);
  }
  fs::create_directories(dir);
  const TrainedSystem& sys = bundle.system;
  json manifest = {{"format_version", kBundleFormat},
                   {"type", "polads_bundle"},
                   {"system", SystemKindName(sys.kind)},
                   {"dataset_fingerprint", bundle.info.dataset_fingerprint},
                   {"train_ads", bundle.info.train_ads},
                   {"test_ads", bundle.info.test_ads},
                   {"split_seed", sys.config.SplitSeed()},
                   {"test_fraction", sys.config.test_fraction},
                   {"text_features", sys.features.text_dim()},
                   {"features", sys.features.dim()}};
  WriteFile(dir / "manifest.json", manifest.dump(2) + "\n");
  WriteFile(dir / "config.json", sys.config.ToJson() + "\n");
  WriteFile(dir / "vectorizer.json", sys.features.vectorizer().ToJson() + "\n");
  WriteFile(dir / "stop_words.txt", sys.features.stop_words_text());
  if (sys.features.encoder()) WriteFile(dir / "encoder.json", sys.features.encoder()->ToJson() + "\n");
  if (const auto* nb = std::get_if<MnbModel>(&sys.model)) {
    WriteFile(dir / "model.json", nb->ToJson() + "\n");
  } else {
    WriteFile(dir / "model.json", std::get<GbdtEnsemble>(sys.model).ToJson() + "\n");
  }
  if (sys.grid) {
    json scores = json::array();
    for (const auto& s : sys.grid->scores) {
      scores.push_back({{"params", s.params}, {"fold_f1", s.fold_f1}, {"mean_f1", s.mean_f1}});
    }
    WriteFile(dir / "grid.json", json({{"best", sys.grid->best}, {"scores", scores}}).dump(2) + "\n");
  }
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  WriteFile(dir / "run_metadata.json",
            json({{"created_unix_ms", std::chrono::duration_cast<std::chrono::milliseconds>(now).count()}}).dump(2) +
                "\n");
}

Bundle LoadBundle(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kIo, "no bundle at " + dir.string());
  try {
    const json manifest = json::parse(ReadFile(dir / "manifest.json"));
    if (manifest.at("type") != "polads_bundle") throw Error(ErrorCode::kBadConfig, "not a model bundle");
    const std::string version = manifest.at("format_version");
    if (version.substr(0, 2) != "1.") throw Error(ErrorCode::kBadConfig, "unsupported bundle version " + version);

    Bundle b;
    b.info.dataset_fingerprint = manifest.at("dataset_fingerprint");
    b.info.train_ads = manifest.at("train_ads");
    b.info.test_ads = manifest.at("test_ads");
    TrainedSystem& sys = b.system;
    sys.kind = ParseSystemKind(manifest.at("system").get<std::string>());
    sys.config = RunConfig::FromJson(ReadFile(dir / "config.json"));
    std::optional<TargetEncoder> encoder;
    if (sys.kind == SystemKind::kGbmTextTargets) encoder = TargetEncoder::FromJson(ReadFile(dir / "encoder.json"));
    sys.features = FeaturePipeline::FromParts(TfIdfVectorizer::FromJson(ReadFile(dir / "vectorizer.json")),
                                              std::move(encoder), ReadFile(dir / "stop_words.txt"));
    const std::string model_text = ReadFile(dir / "model.json");
    if (sys.kind == SystemKind::kMnb) {
      sys.model = MnbModel::FromJson(model_text);
    } else {
      sys.model = GbdtEnsemble::FromJson(model_text);
    }
    if (fs::exists(dir / "grid.json")) {
      const json grid = json::parse(ReadFile(dir / "grid.json"));
      GridSearchResult result;
      result.best = grid.at("best").get<GbdtParams>();
      for (const auto& s : grid.at("scores")) {
        result.scores.push_back(
            {s.at("params").get<GbdtParams>(), s.at("fold_f1").get<std::vector<double>>(), s.at("mean_f1")});
      }
      sys.grid = std::move(result);
    }
    return b;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBadConfig, "bundle " + dir.string() + ": " + e.what());
  }
}

}  // namespace polads
