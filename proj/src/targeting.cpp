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

#include "polads/targeting.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "polads/error.hpp"
#include "strings.hpp"

namespace polads {
namespace {

using nlohmann::json;
using internal::ToLowerAscii;
using internal::Trim;

bool IsDroppedAttribute(std::string_view lower) {
  return lower == "state" || lower == "engaged with content" || lower == "language";
}

// Leading integer of `text` (after trimming), with an optional trailing '+'.
std::optional<int> ParseAgeValue(std::string_view text) {
  text = Trim(text);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr == text.data()) return std::nullopt;
  std::string_view rest = Trim(std::string_view(ptr, text.data() + text.size() - ptr));
  if (!rest.empty() && rest != "+") return std::nullopt;
  return value;
}

std::optional<int> InRange(std::optional<int> age, std::string_view what) {
  if (age && (*age < kMinTargetAge || *age > kMaxTargetAge)) {
    spdlog::warn("ignoring out-of-range {} {}", what, *age);
    return std::nullopt;
  }
  return age;
}

bool ConsumeInt(std::string_view& s, int& out) {
  s = Trim(s);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr == s.data()) return false;
  s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
  s = Trim(s);
  return true;
}

bool ConsumePrefix(std::string_view& s, std::string_view prefix) {
  if (s.substr(0, prefix.size()) != prefix) return false;
  s.remove_prefix(prefix.size());
  s = Trim(s);
  return true;
}

}  // namespace

TargetingSpec ParseTargets(std::string_view raw) {
  TargetingSpec spec;
  if (Trim(raw).empty()) return spec;
  json arr;
  try {
    arr = json::parse(raw);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedTargets, e.what());
  }
  if (arr.is_null()) return spec;
  if (!arr.is_array()) throw Error(ErrorCode::kMalformedTargets, "payload is not an array");
  spec.entries.reserve(arr.size());
  for (const auto& element : arr) {
    if (!element.is_object()) throw Error(ErrorCode::kMalformedTargets, "element is not an object");
    const auto target = element.find("target");
    if (target == element.end() || !target->is_string() ||
        Trim(target->get_ref<const std::string&>()).empty()) {
      throw Error(ErrorCode::kMalformedTargets, "element without a target name");
    }
    TargetEntry entry{target->get<std::string>(), std::nullopt};
    if (const auto seg = element.find("segment"); seg != element.end() && !seg->is_null()) {
      if (seg->is_string()) {
        entry.segment = seg->get<std::string>();
      } else if (seg->is_number() || seg->is_boolean()) {
        entry.segment = seg->dump();
      } else {
        throw Error(ErrorCode::kMalformedTargets, "segment is not a scalar");
      }
    }
    spec.entries.push_back(std::move(entry));
  }
  return spec;
}

TargetingSpec ParseTargetsLenient(std::string_view raw, std::string_view ad_id) {
  try {
    return ParseTargets(raw);
  } catch (const Error& e) {
    spdlog::warn("ad {}: {}; targeting treated as missing", ad_id, e.what());
    return {};
  }
}

AgeBounds ParseAgeRange(std::string_view text) {
  std::string lower = ToLowerAscii(Trim(text));
  // En dash and em dash read as a hyphen.
  for (std::string_view dash : {"–", "—"}) {
    for (auto pos = lower.find(dash); pos != std::string::npos; pos = lower.find(dash)) {
      lower.replace(pos, dash.size(), "-");
    }
  }
  std::string_view s = lower;
  AgeBounds bounds;
  int first = 0;
  if (ConsumePrefix(s, "up to") || ConsumePrefix(s, "under")) {
    int upper = 0;
    if (ConsumeInt(s, upper) && s.empty()) bounds.max_age = upper;
    return bounds;
  }
  if (!ConsumeInt(s, first)) return bounds;
  if (s.empty()) {
    bounds.min_age = first;
    bounds.max_age = first;
  } else if (s == "+" || s == "and older" || s == "and over" || s == "or older") {
    bounds.min_age = first;
  } else if (s == "and younger" || s == "and under" || s == "or younger") {
    bounds.max_age = first;
  } else if (ConsumePrefix(s, "-") || ConsumePrefix(s, "to")) {
    int second = 0;
    if (ConsumeInt(s, second) && (s.empty() || s == "+")) {
      bounds.min_age = first;
      bounds.max_age = second;
    }
  }
  return bounds;
}

NormalizedTargets NormalizeTargets(const TargetingSpec& spec) {
  NormalizedTargets out;
  AgeBounds fallback;
  for (const auto& entry : spec.entries) {
    const std::string name(Trim(entry.target));
    const std::string lower = ToLowerAscii(name);
    const std::string_view segment = entry.segment ? Trim(*entry.segment) : std::string_view{};
    if (IsDroppedAttribute(lower)) continue;
    if (lower == "minage" || lower == "maxage") {
      const auto age = ParseAgeValue(segment);
      if (!age) {
        spdlog::warn("unparseable {} '{}'", name, segment);
        continue;
      }
      auto& slot = lower == "minage" ? out.min_age : out.max_age;
      if (!slot) slot = age;
      continue;
    }
    if (lower == "age") {
      const AgeBounds parsed = ParseAgeRange(segment);
      if (!parsed.min_age && !parsed.max_age) spdlog::warn("unparseable Age '{}'", segment);
      if (!fallback.min_age) fallback.min_age = parsed.min_age;
      if (!fallback.max_age) fallback.max_age = parsed.max_age;
      continue;
    }
    out.categorical.emplace(name, std::string(segment));
  }
  if (!out.min_age) out.min_age = fallback.min_age;
  if (!out.max_age) out.max_age = fallback.max_age;
  out.min_age = InRange(out.min_age, "MinAge");
  out.max_age = InRange(out.max_age, "MaxAge");
  if (out.min_age && out.max_age && *out.max_age < *out.min_age) {
    spdlog::warn("MaxAge {} below MinAge {}; dropping MaxAge", *out.max_age, *out.min_age);
    out.max_age.reset();
  }
  return out;
}

TargetEncoder TargetEncoder::Fit(std::span<const NormalizedTargets> train) {
  if (train.empty()) throw Error(ErrorCode::kEmptyTrainingSet, "no training targets");
  std::map<std::string, std::set<std::string>> vocabulary;
  for (const auto& targets : train) {
    for (const auto& [attribute, value] : targets.categorical) {
      auto& values = vocabulary[attribute];
      if (!value.empty()) values.insert(value);
    }
  }
  TargetEncoder enc;
  enc.columns_.push_back({ColumnKind::kNumeric, "MinAge", "", "MinAge"});
  enc.columns_.push_back({ColumnKind::kNumeric, "MaxAge", "", "MaxAge"});
  for (const auto& [attribute, values] : vocabulary) {
    enc.columns_.push_back({ColumnKind::kMissingIndicator, attribute, "", attribute + "_0"});
    for (const auto& value : values) {
      enc.columns_.push_back({ColumnKind::kValue, attribute, value, attribute + "=" + value});
    }
  }
  enc.Index();
  return enc;
}

void TargetEncoder::Index() {
  value_index_.clear();
  missing_index_.clear();
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    const auto& col = columns_[i];
    const auto id = static_cast<ColumnId>(i);
    if (col.kind == ColumnKind::kValue) value_index_.emplace(AttributeValue{col.attribute, col.value}, id);
    if (col.kind == ColumnKind::kMissingIndicator) missing_index_.emplace(col.attribute, id);
  }
}

SparseVector TargetEncoder::Encode(const NormalizedTargets& targets) const {
  std::vector<std::pair<ColumnId, double>> entries;
  entries.emplace_back(kMinAgeColumn, targets.min_age ? *targets.min_age : kMissingAge);
  entries.emplace_back(kMaxAgeColumn, targets.max_age ? *targets.max_age : kMissingAge);
  std::set<std::string> present;
  for (const auto& pair : targets.categorical) {
    present.insert(pair.first);
    if (const auto it = value_index_.find(pair); it != value_index_.end()) {
      entries.emplace_back(it->second, 1.0);
    }
  }
  for (const auto& [attribute, column] : missing_index_) {
    if (!present.contains(attribute)) entries.emplace_back(column, 1.0);
  }
  return SparseVector::FromPairs(dim(), std::move(entries));
}

std::vector<std::string> TargetEncoder::ColumnNames() const {
  std::vector<std::string> names;
  names.reserve(columns_.size());
  for (const auto& col : columns_) names.push_back(col.name);
  return names;
}

std::optional<ColumnId> TargetEncoder::ValueColumn(const std::string& attribute,
                                                   const std::string& value) const {
  const auto it = value_index_.find({attribute, value});
  if (it == value_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ColumnId> TargetEncoder::MissingColumn(const std::string& attribute) const {
  const auto it = missing_index_.find(attribute);
  if (it == missing_index_.end()) return std::nullopt;
  return it->second;
}

std::string TargetEncoder::ToJson() const {
  json columns = json::array();
  std::vector<std::string> attributes;
  for (const auto& col : columns_) {
    const char* kind = col.kind == ColumnKind::kNumeric            ? "numeric"
                       : col.kind == ColumnKind::kMissingIndicator ? "missing"
                                                                   : "value";
    columns.push_back({{"kind", kind}, {"attribute", col.attribute}, {"value", col.value},
                       {"name", col.name}});
    if (col.kind == ColumnKind::kMissingIndicator) attributes.push_back(col.attribute);
  }
  json doc = {{"schema_version", kSchemaVersion},
              {"type", "target_encoder"},
              {"attributes", attributes},
              {"columns", columns}};
  return doc.dump(1);
}

TargetEncoder TargetEncoder::FromJson(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("type") != "target_encoder") throw Error(ErrorCode::kBadConfig, "not a target encoder");
    if (doc.at("schema_version").get<int>() > kSchemaVersion) {
      throw Error(ErrorCode::kBadConfig, "unsupported target encoder schema version");
    }
    TargetEncoder enc;
    for (const auto& col : doc.at("columns")) {
      const std::string kind = col.at("kind");
      Column c;
      c.kind = kind == "numeric"   ? ColumnKind::kNumeric
               : kind == "missing" ? ColumnKind::kMissingIndicator
                                   : ColumnKind::kValue;
      if (kind != "numeric" && kind != "missing" && kind != "value") {
        throw Error(ErrorCode::kBadConfig, "unknown column kind " + kind);
      }
      c.attribute = col.at("attribute");
      c.value = col.at("value");
      c.name = col.at("name");
      enc.columns_.push_back(std::move(c));
    }
    if (enc.columns_.size() < 2 || enc.columns_[0].name != "MinAge" || enc.columns_[1].name != "MaxAge") {
      throw Error(ErrorCode::kBadConfig, "target encoder lacks the age columns");
    }
    enc.Index();
    return enc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBadConfig, std::string("target encoder: ") + e.what());
  }
}

}  // namespace polads
