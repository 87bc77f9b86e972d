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

#include "polads/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "polads/error.hpp"

namespace polads {
namespace {

using nlohmann::json;

std::string OptionalString(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
  throw Error(ErrorCode::kMalformedRecord, std::string("field '") + key + "' is not a string");
}

std::int64_t VoteCount(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return 0;
  std::int64_t votes = 0;
  if (it->is_number_integer()) {
    votes = it->get<std::int64_t>();
  } else if (it->is_number_float()) {
    const double v = it->get<double>();
    if (!std::isfinite(v) || std::floor(v) != v) {
      throw Error(ErrorCode::kBadVoteCount, std::string("'") + key + "' is not an integer");
    }
    votes = static_cast<std::int64_t>(v);
  } else {
    throw Error(ErrorCode::kBadVoteCount, std::string("'") + key + "' is not a number");
  }
  if (votes < 0) {
    throw Error(ErrorCode::kBadVoteCount, std::string("'") + key + "' is negative");
  }
  return votes;
}

bool ParseDigits(std::string_view text, std::size_t pos, std::size_t count, int& out) {
  if (pos + count > text.size()) return false;
  const char* first = text.data() + pos;
  const auto [ptr, ec] = std::from_chars(first, first + count, out);
  return ec == std::errc() && ptr == first + count;
}

std::uint64_t Fnv1a(std::uint64_t hash, std::string_view bytes) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

}  // namespace

AdRecord ParseRecord(std::string_view json_text) {
  json obj;
  try {
    obj = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedRecord, std::string("bad JSON: ") + e.what());
  }
  if (!obj.is_object()) throw Error(ErrorCode::kMalformedRecord, "record is not a JSON object");

  AdRecord rec;
  rec.id = OptionalString(obj, "id");
  if (rec.id.empty()) throw Error(ErrorCode::kMalformedRecord, "missing or empty id");
  rec.title = OptionalString(obj, "title");
  rec.message = OptionalString(obj, "message");
  if (rec.title.empty() && rec.message.empty()) {
    throw Error(ErrorCode::kMalformedRecord, "record " + rec.id + " has neither title nor message");
  }
  rec.political_votes = VoteCount(obj, "political");
  rec.not_political_votes = VoteCount(obj, "not_political");

  if (const auto it = obj.find("political_probability"); it != obj.end() && !it->is_null()) {
    if (!it->is_number()) {
      throw Error(ErrorCode::kMalformedRecord, "political_probability is not a number");
    }
    const double p = it->get<double>();
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::kMalformedRecord, "political_probability outside [0, 1]");
    }
    rec.political_probability = p;
  }
  rec.advertiser = OptionalString(obj, "advertiser");
  rec.created_at = OptionalString(obj, "created_at");

  if (const auto it = obj.find("targets"); it != obj.end() && !it->is_null()) {
    if (it->is_string()) {
      rec.targets_raw = it->get<std::string>();
    } else if (it->is_array()) {
      rec.targets_raw = it->dump();
    } else {
      throw Error(ErrorCode::kMalformedRecord, "targets is neither a string nor an array");
    }
  }
  return rec;
}

std::string SerializeRecord(const AdRecord& rec) {
  json obj = json::object();
  obj["id"] = rec.id;
  obj["title"] = rec.title;
  obj["message"] = rec.message;
  obj["political"] = rec.political_votes;
  obj["not_political"] = rec.not_political_votes;
  if (rec.political_probability) obj["political_probability"] = *rec.political_probability;
  obj["advertiser"] = rec.advertiser;
  obj["created_at"] = rec.created_at;
  obj["targets"] = rec.targets_raw;
  return obj.dump();
}

std::optional<Label> DeriveLabel(const AdRecord& rec) {
  if (rec.political_votes > rec.not_political_votes) return Label::kPolitical;
  if (rec.political_votes < rec.not_political_votes) return Label::kNonPolitical;
  return std::nullopt;
}

std::optional<std::int64_t> ParseTimestampMicros(std::string_view text) {
  int year = 0, month = 0, day = 0;
  if (!ParseDigits(text, 0, 4, year) || text.size() < 10 || text[4] != '-' ||
      !ParseDigits(text, 5, 2, month) || text[7] != '-' || !ParseDigits(text, 8, 2, day)) {
    return std::nullopt;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{static_cast<unsigned>(month)},
                                        std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) return std::nullopt;
  std::int64_t micros =
      static_cast<std::int64_t>(std::chrono::sys_days{ymd}.time_since_epoch().count()) *
      86'400'000'000LL;

  std::size_t pos = 10;
  if (pos == text.size()) return micros;
  if (text[pos] != 'T' && text[pos] != ' ') return std::nullopt;
  int hh = 0, mm = 0, ss = 0;
  if (!ParseDigits(text, pos + 1, 2, hh) || text.size() < pos + 9 || text[pos + 3] != ':' ||
      !ParseDigits(text, pos + 4, 2, mm) || text[pos + 6] != ':' ||
      !ParseDigits(text, pos + 7, 2, ss) || hh > 23 || mm > 59 || ss > 60) {
    return std::nullopt;
  }
  micros += ((hh * 60LL + mm) * 60LL + ss) * 1'000'000LL;
  pos += 9;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::int64_t scale = 100'000;
    std::size_t digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      micros += (text[pos] - '0') * scale;
      scale /= 10;
      ++pos;
      ++digits;
    }
    if (digits == 0) return std::nullopt;
  }
  if (pos == text.size()) return micros;
  if (text[pos] == 'Z' && pos + 1 == text.size()) return micros;
  if (text[pos] != '+' && text[pos] != '-') return std::nullopt;
  const int sign = text[pos] == '+' ? 1 : -1;
  int off_h = 0, off_m = 0;
  if (!ParseDigits(text, pos + 1, 2, off_h)) return std::nullopt;
  pos += 3;
  if (pos < text.size()) {
    if (text[pos] == ':') ++pos;
    if (!ParseDigits(text, pos, 2, off_m) || pos + 2 != text.size()) return std::nullopt;
  }
  return micros - sign * (off_h * 60LL + off_m) * 60'000'000LL;
}

Dataset::Dataset(std::vector<LabeledAd> records) : records_(std::move(records)) {
  std::unordered_map<std::string_view, std::size_t> seen;
  seen.reserve(records_.size());
  for (const auto& ad : records_) {
    if (!seen.emplace(ad.record.id, 0).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate ad id " + ad.record.id);
    }
    const auto label = DeriveLabel(ad.record);
    if (!label || *label != ad.label) {
      throw Error(ErrorCode::kInvalidArgument, "label of ad " + ad.record.id +
                                                   " violates the vote rule");
    }
    advertisers_.insert(ad.record.advertiser);
  }
}

std::size_t Dataset::CountLabel(Label label) const {
  return static_cast<std::size_t>(std::count_if(
      records_.begin(), records_.end(), [label](const LabeledAd& ad) { return ad.label == label; }));
}

Dataset Dataset::Subset(std::span<const std::size_t> positions) const {
  std::vector<LabeledAd> out;
  out.reserve(positions.size());
  for (std::size_t p : positions) out.push_back(records_.at(p));
  return Dataset(std::move(out));
}

std::string Dataset::Fingerprint() const {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (const auto& ad : records_) {
    hash = Fnv1a(hash, ad.record.id);
    hash = Fnv1a(hash, "\x1f");
    hash = Fnv1a(hash, ad.record.advertiser);
    hash = Fnv1a(hash, ad.label == Label::kPolitical ? std::string_view("P") : std::string_view("N"));
    hash = Fnv1a(hash, SerializeRecord(ad.record));
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << hash;
  return out.str();
}

LoadResult LoadCorpus(std::istream& in, IngestPolicy policy) {
  IngestSummary summary;
  struct Candidate {
    AdRecord record;
    std::optional<std::int64_t> timestamp;
  };
  std::vector<Candidate> candidates;
  std::unordered_map<std::string, std::size_t> by_id;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ++summary.lines;
    AdRecord rec;
    try {
      rec = ParseRecord(line);
    } catch (const Error& e) {
      if (policy == IngestPolicy::kFailFast) {
        throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
      }
      ++summary.malformed;
      summary.issues.push_back({line_no, e.what()});
      spdlog::warn("skipping line {}: {}", line_no, e.what());
      continue;
    }
    auto ts = ParseTimestampMicros(rec.created_at);
    const auto [it, inserted] = by_id.emplace(rec.id, candidates.size());
    if (inserted) {
      candidates.push_back({std::move(rec), ts});
      continue;
    }
    ++summary.duplicates;
    // Latest created_at wins; unparseable timestamps sort first, and on equal
    // timestamps the later line wins.
    Candidate& current = candidates[it->second];
    if (ts >= current.timestamp) current = {std::move(rec), ts};
  }

  std::vector<LabeledAd> records;
  records.reserve(candidates.size());
  for (auto& c : candidates) {
    const auto label = DeriveLabel(c.record);
    if (!label) {
      ++summary.skipped;
      continue;
    }
    (*label == Label::kPolitical ? summary.political : summary.not_political)++;
    records.push_back({std::move(c.record), *label});
  }
  summary.kept = records.size();
  return {Dataset(std::move(records)), std::move(summary)};
}

LoadResult LoadCorpus(const std::filesystem::path& path, IngestPolicy policy) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return LoadCorpus(in, policy);
}

void SaveDataset(const Dataset& dataset, std::ostream& out) {
  for (const auto& ad : dataset.records()) out << SerializeRecord(ad.record) << '\n';
}

void SaveDataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  SaveDataset(dataset, out);
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

std::string IngestSummaryJson(const IngestSummary& s) {
  json issues = json::array();
  for (const auto& issue : s.issues) issues.push_back({{"line", issue.line}, {"message", issue.message}});
  json obj = {{"lines", s.lines},         {"malformed", s.malformed},
              {"duplicates", s.duplicates}, {"skipped", s.skipped},
              {"kept", s.kept},           {"political", s.political},
              {"not_political", s.not_political}, {"issues", issues}};
  return obj.dump(2);
}

}  // namespace polads
