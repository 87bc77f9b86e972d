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
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polads/sparse.hpp"

namespace polads {

// One element of an ad's targets payload. The segment may be absent when the
// advertiser used the attribute without a value.
struct TargetEntry {
  std::string target;
  std::optional<std::string> segment;

  bool operator==(const TargetEntry&) const = default;
};

struct TargetingSpec {
  std::vector<TargetEntry> entries;
};

// Parses the JSON array carried in AdRecord::targets_raw. An empty string is
// an empty payload. Unknown keys are ignored and duplicates are kept.
// Throws Error(kMalformedTargets).
TargetingSpec ParseTargets(std::string_view raw);

// ParseTargets, but a malformed payload is logged and yields an empty spec so
// that the record's targeting features all read as missing.
TargetingSpec ParseTargetsLenient(std::string_view raw, std::string_view ad_id);

struct AgeBounds {
  std::optional<int> min_age;
  std::optional<int> max_age;
};

// Parses age-range phrases such as "18 and older", "25 - 54", "18 to 49",
// "65+", "up to 35" or a single age. Unrecognised text yields no bounds.
AgeBounds ParseAgeRange(std::string_view text);

inline constexpr int kMinTargetAge = 13;
inline constexpr int kMaxTargetAge = 120;

// Attribute/value pair after cleaning. A value-less attribute is stored with
// an empty value.
using AttributeValue = std::pair<std::string, std::string>;

struct NormalizedTargets {
  std::optional<int> min_age;
  std::optional<int> max_age;
  std::set<AttributeValue> categorical;

  bool operator==(const NormalizedTargets&) const = default;
};

// Drops State, Engaged with Content and Language; folds MinAge/MaxAge (with
// Age as a per-bound fallback) into numeric bounds; trims everything else.
NormalizedTargets NormalizeTargets(const TargetingSpec& spec);

// Binary-feature vocabulary over targeting attributes.
//
// Column layout: 0 = MinAge, 1 = MaxAge (numeric, -1 when absent), then for
// each attribute in sorted order its missing indicator ("<attr>_0") followed
// by one column per value seen at fit time ("<attr>=<value>", sorted).
class TargetEncoder {
 public:
  static constexpr int kSchemaVersion = 1;
  static constexpr double kMissingAge = -1.0;
  static constexpr ColumnId kMinAgeColumn = 0;
  static constexpr ColumnId kMaxAgeColumn = 1;

  enum class ColumnKind { kNumeric, kMissingIndicator, kValue };

  struct Column {
    ColumnKind kind;
    std::string attribute;
    std::string value;  // empty unless kValue
    std::string name;

    bool operator==(const Column&) const = default;
  };

  TargetEncoder() = default;

  // Throws Error(kEmptyTrainingSet) when `train` is empty.
  static TargetEncoder Fit(std::span<const NormalizedTargets> train);

  SparseVector Encode(const NormalizedTargets& targets) const;

  std::size_t dim() const { return columns_.size(); }
  const std::vector<Column>& columns() const { return columns_; }
  std::vector<std::string> ColumnNames() const;
  std::optional<ColumnId> ValueColumn(const std::string& attribute, const std::string& value) const;
  std::optional<ColumnId> MissingColumn(const std::string& attribute) const;

  std::string ToJson() const;
  // Throws Error(kBadConfig) on schema mismatch.
  static TargetEncoder FromJson(std::string_view text);

  bool operator==(const TargetEncoder& other) const { return columns_ == other.columns_; }

 private:
  void Index();

  std::vector<Column> columns_;
  std::map<AttributeValue, ColumnId> value_index_;
  std::map<std::string, ColumnId> missing_index_;
};

}  // namespace polads
