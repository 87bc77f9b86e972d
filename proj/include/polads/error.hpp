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

#include <stdexcept>
#include <string>
#include <string_view>

namespace polads {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kMalformedRecord,
  kBadVoteCount,
  kEmptyDataset,
  kMalformedTargets,
  kEmptyTrainingSet,
  kEmptyCorpus,
  kEmptyVocabulary,
  kSingleClassTraining,
  kNegativeFeature,
  kDimensionMismatch,
  kInsufficientGroups,
  kLengthMismatch,
  kMissingCover,
  kEmptyMatrix,
  kTooManyFeatures,
  kIncompatibleBundles,
  kUnsupportedModel,
  kBadConfig,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported with this exception type. The code is
// stable and is what the CLI maps onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kBadVoteCount: return "BadVoteCount";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kMalformedTargets: return "MalformedTargets";
    case ErrorCode::kEmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kEmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::kSingleClassTraining: return "SingleClassTraining";
    case ErrorCode::kNegativeFeature: return "NegativeFeature";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInsufficientGroups: return "InsufficientGroups";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kMissingCover: return "MissingCover";
    case ErrorCode::kEmptyMatrix: return "EmptyMatrix";
    case ErrorCode::kTooManyFeatures: return "TooManyFeatures";
    case ErrorCode::kIncompatibleBundles: return "IncompatibleBundles";
    case ErrorCode::kUnsupportedModel: return "UnsupportedModel";
    case ErrorCode::kBadConfig: return "BadConfig";
  }
  return "Unknown";
}

}  // namespace polads
