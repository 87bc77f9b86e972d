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

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polads/corpus.hpp"
#include "polads/sparse.hpp"

namespace polads {

struct MnbOptions {
  double alpha = 1.0;  // additive (Laplace) smoothing
  // Derive the priors from inverse-frequency class weights instead of the
  // class frequencies, which makes them uniform. Off by default.
  bool reweight_priors = false;
};

// Multinomial Naive Bayes over nonnegative features. Arrays are indexed by
// static_cast<int>(Label).
struct MnbModel {
  static constexpr int kSchemaVersion = 1;

  double alpha = 1.0;
  std::array<double, 2> log_prior{};
  std::array<std::vector<double>, 2> log_likelihood;

  std::size_t dim() const { return log_likelihood[0].size(); }

  std::string ToJson() const;
  static MnbModel FromJson(std::string_view text);

  bool operator==(const MnbModel&) const = default;
};

// Throws Error(kSingleClassTraining), Error(kNegativeFeature),
// Error(kLengthMismatch).
MnbModel TrainMnb(const SparseMatrix& x, std::span<const Label> y, const MnbOptions& options = {});

// Posterior P(Political | x), normalised in log space.
double PredictMnb(const MnbModel& model, const SparseVector& x);

}  // namespace polads
