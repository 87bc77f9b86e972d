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

#include "polads/naive_bayes.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "polads/error.hpp"

namespace polads {

MnbModel TrainMnb(const SparseMatrix& x, std::span<const Label> y, const MnbOptions& options) {
  if (x.size() != y.size()) throw Error(ErrorCode::kLengthMismatch, "features and labels differ in length");
  if (x.size() == 0) throw Error(ErrorCode::kEmptyTrainingSet, "no training rows");
  if (!(options.alpha > 0.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must be positive");

  const std::size_t dim = x.cols;
  std::array<std::vector<double>, 2> counts{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
  std::array<std::size_t, 2> docs{0, 0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int c = static_cast<int>(y[i]);
    ++docs[c];
    const auto& row = x.rows[i];
    if (row.dim() != dim) throw Error(ErrorCode::kDimensionMismatch, "row width differs from matrix width");
    for (std::size_t k = 0; k < row.nnz(); ++k) {
      if (row.values()[k] < 0.0) throw Error(ErrorCode::kNegativeFeature, "row " + std::to_string(i));
      counts[c][row.indices()[k]] += row.values()[k];
    }
  }
  if (docs[0] == 0 || docs[1] == 0) throw Error(ErrorCode::kSingleClassTraining, "both classes are required");

  MnbModel model;
  model.alpha = options.alpha;
  const double n = static_cast<double>(x.size());
  for (int c = 0; c < 2; ++c) {
    // Inverse-frequency weights give each class a total mass of n.
    model.log_prior[c] = options.reweight_priors ? std::log(0.5) : std::log(static_cast<double>(docs[c]) / n);
    double total = 0.0;
    for (double v : counts[c]) total += v;
    const double denom = std::log(total + options.alpha * static_cast<double>(dim));
    model.log_likelihood[c].resize(dim);
    for (std::size_t f = 0; f < dim; ++f) {
      model.log_likelihood[c][f] = std::log(counts[c][f] + options.alpha) - denom;
    }
  }
  return model;
}

double PredictMnb(const MnbModel& model, const SparseVector& x) {
  if (x.dim() != model.dim()) throw Error(ErrorCode::kDimensionMismatch, "input width differs from model");
  std::array<double, 2> joint = model.log_prior;
  for (std::size_t k = 0; k < x.nnz(); ++k) {
    const auto f = x.indices()[k];
    const double v = x.values()[k];
    if (v < 0.0) throw Error(ErrorCode::kNegativeFeature, "negative input feature");
    joint[0] += v * model.log_likelihood[0][f];
    joint[1] += v * model.log_likelihood[1][f];
  }
  const double top = std::max(joint[0], joint[1]);
  const double e0 = std::exp(joint[0] - top);
  const double e1 = std::exp(joint[1] - top);
  return e1 / (e0 + e1);
}

std::string MnbModel::ToJson() const {
  nlohmann::json doc = {{"schema_version", kSchemaVersion},
                        {"type", "multinomial_nb"},
                        {"alpha", alpha},
                        {"log_prior", log_prior},
                        {"log_likelihood", log_likelihood}};
  return doc.dump(1);
}

MnbModel MnbModel::FromJson(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    if (doc.at("type") != "multinomial_nb") throw Error(ErrorCode::kBadConfig, "not a naive Bayes model");
    if (doc.at("schema_version").get<int>() > kSchemaVersion) {
      throw Error(ErrorCode::kBadConfig, "unsupported naive Bayes schema version");
    }
    MnbModel m;
    m.alpha = doc.at("alpha");
    m.log_prior = doc.at("log_prior").get<std::array<double, 2>>();
    m.log_likelihood = doc.at("log_likelihood").get<std::array<std::vector<double>, 2>>();
    if (m.log_likelihood[0].size() != m.log_likelihood[1].size()) {
      throw Error(ErrorCode::kBadConfig, "per-class likelihood widths differ");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadConfig, std::string("naive Bayes model: ") + e.what());
  }
}

}  // namespace polads
