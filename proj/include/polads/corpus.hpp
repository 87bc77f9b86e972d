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
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polads {

// Political is the positive class for every metric.
enum class Label { kNonPolitical = 0, kPolitical = 1 };

inline std::string_view LabelName(Label label) {
  return label == Label::kPolitical ? "political" : "not_political";
}

// One archived advertisement as delivered by the ad archive feed.
struct AdRecord {
  std::string id;
  std::string title;
  std::string message;  // may contain markup
  std::int64_t political_votes = 0;
  std::int64_t not_political_votes = 0;
  // Score of the archive's own classifier. Audit output only, never a feature.
  std::optional<double> political_probability;
  std::string advertiser;
  std::string created_at;   // ISO-8601
  std::string targets_raw;  // JSON-encoded list of {target, segment}

  bool operator==(const AdRecord&) const = default;
};

struct LabeledAd {
  AdRecord record;
  Label label;

  bool operator==(const LabeledAd&) const = default;
};

// Parses one JSON object in the archive schema.
// Throws Error(kMalformedRecord) or Error(kBadVoteCount).
AdRecord ParseRecord(std::string_view json_text);

// Serialises a record back into the archive schema as a single JSON line.
std::string SerializeRecord(const AdRecord& record);

// Strict-majority vote rule; std::nullopt means the record is unlabeled
// (tied votes, including 0-0).
std::optional<Label> DeriveLabel(const AdRecord& record);

// Microseconds since the epoch for an ISO-8601 timestamp, accepting either a
// 'T' or a space separator, optional fraction and optional zone offset.
std::optional<std::int64_t> ParseTimestampMicros(std::string_view text);

// Immutable labeled corpus. Ids are unique and every label satisfies the vote
// rule; the constructor enforces both.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<LabeledAd> records);

  const std::vector<LabeledAd>& records() const { return records_; }
  const std::set<std::string>& advertisers() const { return advertisers_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const LabeledAd& operator[](std::size_t i) const { return records_[i]; }

  std::size_t CountLabel(Label label) const;

  // Records at the given positions, in that order. Ids must stay unique.
  Dataset Subset(std::span<const std::size_t> positions) const;

  // Stable content hash over ids, labels and advertisers (hex string).
  std::string Fingerprint() const;

  bool operator==(const Dataset& other) const { return records_ == other.records_; }

 private:
  std::vector<LabeledAd> records_;
  std::set<std::string> advertisers_;
};

enum class IngestPolicy { kSkipAndLog, kFailFast };

struct IngestIssue {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct IngestSummary {
  std::size_t lines = 0;          // non-blank input lines
  std::size_t malformed = 0;      // unparseable lines dropped
  std::size_t duplicates = 0;     // superseded snapshots of an already seen id
  std::size_t skipped = 0;        // tied or zero votes
  std::size_t kept = 0;
  std::size_t political = 0;
  std::size_t not_political = 0;
  std::vector<IngestIssue> issues;
};

struct LoadResult {
  Dataset dataset;
  IngestSummary summary;
};

// Newline-delimited JSON, one ad per line. With kFailFast the first bad line
// throws an Error whose message carries the line number.
LoadResult LoadCorpus(const std::filesystem::path& path,
                      IngestPolicy policy = IngestPolicy::kSkipAndLog);
LoadResult LoadCorpus(std::istream& in, IngestPolicy policy = IngestPolicy::kSkipAndLog);

void SaveDataset(const Dataset& dataset, const std::filesystem::path& path);
void SaveDataset(const Dataset& dataset, std::ostream& out);

std::string IngestSummaryJson(const IngestSummary& summary);

}  // namespace polads
