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

#include "polads/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "polads/random.hpp"

namespace polads {

namespace {

constexpr std::array<std::string_view, 24> kPoliticalWords = {
    "vote",     "election", "candidate", "congress",  "senate",    "campaign", "democrats", "republicans",
    "midterm",  "ballot",   "policy",    "healthcare", "immigration", "taxes",  "reform",    "rally",
    "petition", "governor", "district",  "voters",    "legislation", "president", "donate", "values"};

constexpr std::array<std::string_view, 24> kCommercialWords = {
    "sale",    "discount", "shop",     "shoes",    "pizza",   "delivery", "download", "subscription",
    "hotel",   "travel",   "fitness",  "skincare", "coffee",  "game",     "recipe",   "coupon",
    "shipping", "fashion", "furniture", "insurance", "course", "concert", "tickets",  "jewelry"};

constexpr std::array<std::string_view, 16> kSharedWords = {
    "today", "new",  "join",    "learn",  "more",   "now",    "help",  "community",
    "support", "future", "family", "great", "people", "local", "week", "together"};

constexpr std::array<std::string_view, 10> kStates = {
    "Texas", "Florida", "California", "Ohio", "Pennsylvania", "Georgia", "Michigan", "Arizona", "New York", "Nevada"};

constexpr std::array<std::string_view, 6> kPoliticalInterests = {
    "Politics", "Democratic Party", "Conservatism", "News", "Social justice", "Veterans"};

constexpr std::array<std::string_view, 6> kCommercialInterests = {
    "Shopping", "Travel", "Fitness and wellness", "Cooking", "Video games", "Fashion"};

template <std::size_t N>
std::string_view Pick(Rng& rng, const std::array<std::string_view, N>& words) {
  return words[rng.UniformIndex(N)];
}

struct AdvertiserProfile {
  std::string name;
  bool political = false;
  std::string_view signature;  // a word this advertiser repeats
  int min_age = 18;
  std::string_view region;
};

std::string Sentence(Rng& rng, bool political, double noise, std::size_t length) {
  std::string out;
  for (std::size_t i = 0; i < length; ++i) {
    const double u = rng.UniformUnit();
    std::string_view word;
    if (u < 0.3) {
      word = Pick(rng, kSharedWords);
    } else {
      const bool own = rng.UniformUnit() >= noise;
      word = (political == own) ? Pick(rng, kPoliticalWords) : Pick(rng, kCommercialWords);
    }
    if (!out.empty()) out += ' ';
    out += word;
  }
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

std::string Targets(Rng& rng, const AdvertiserProfile& adv) {
  nlohmann::json arr = nlohmann::json::array();
  const int min_age = adv.min_age + static_cast<int>(rng.UniformIndex(3)) * 5;
  arr.push_back({{"target", "Age"}, {"segment", std::to_string(min_age) + " and older"}});
  arr.push_back({{"target", "MinAge"}, {"segment", std::to_string(min_age)}});
  if (rng.UniformUnit() < 0.3) arr.push_back({{"target", "MaxAge"}, {"segment", "65"}});
  if (rng.UniformUnit() < 0.8) arr.push_back({{"target", "Region"}, {"segment", adv.region}});
  arr.push_back({{"target", "Location Type"}, {"segment", rng.UniformUnit() < 0.5 ? "HOME" : "recent"}});
  if (rng.UniformUnit() < 0.7) {
    const bool own = rng.UniformUnit() >= 0.2;
    const auto interest =
        (adv.political == own) ? Pick(rng, kPoliticalInterests) : Pick(rng, kCommercialInterests);
    arr.push_back({{"target", "Interest"}, {"segment", interest}});
  }
  if (!adv.political && rng.UniformUnit() < 0.4) {
    arr.push_back({{"target", "Gender"}, {"segment", rng.UniformUnit() < 0.5 ? "women" : "men"}});
  }
  if (rng.UniformUnit() < 0.2) arr.push_back({{"target", "Retargeting"}, {"segment", "people who may be similar to their customers"}});
  return arr.dump();
}

}  // namespace

std::vector<AdRecord> GenerateSyntheticAds(const SyntheticOptions& options) {
  Rng rng(options.seed);
  std::vector<AdvertiserProfile> advertisers;
  const std::size_t n_adv = std::max<std::size_t>(options.advertisers, 1);
  advertisers.reserve(n_adv);
  for (std::size_t a = 0; a < n_adv; ++a) {
    AdvertiserProfile p;
    char name[32];
    std::snprintf(name, sizeof name, "Advertiser %04zu", a);
    p.name = name;
    p.political = rng.UniformUnit() < options.political_share;
    p.signature = p.political ? Pick(rng, kPoliticalWords) : Pick(rng, kCommercialWords);
    static constexpr std::array<int, 4> kPoliticalAges = {18, 25, 35, 45};
    static constexpr std::array<int, 4> kCommercialAges = {13, 18, 18, 21};
    p.min_age = p.political ? kPoliticalAges[rng.UniformIndex(4)] : kCommercialAges[rng.UniformIndex(4)];
    p.region = Pick(rng, kStates);
    advertisers.push_back(std::move(p));
  }

  std::vector<AdRecord> out;
  out.reserve(options.ads);
  for (std::size_t i = 0; i < options.ads; ++i) {
    const AdvertiserProfile& adv = advertisers[i < n_adv ? i : rng.UniformIndex(n_adv)];
    AdRecord r;
    r.id = "syn" + std::to_string(i);
    r.advertiser = adv.name;
    r.title = adv.name;
    r.message = "<p>" + Sentence(rng, adv.political, options.text_noise, 6 + rng.UniformIndex(10)) + " " +
                std::string(adv.signature) + ".</p>";
    if (rng.UniformUnit() < 0.3) {
      r.message += "<p>" + Sentence(rng, adv.political, options.text_noise, 4 + rng.UniformIndex(6)) + " &amp; more.</p>";
    }
    const int voters = 1 + static_cast<int>(rng.UniformIndex(5));
    for (int v = 0; v < voters; ++v) {
      const bool says_political = adv.political != (rng.UniformUnit() < options.vote_noise);
      (says_political ? r.political_votes : r.not_political_votes) += 1;
    }
    r.political_probability = 0.7 + 0.3 * rng.UniformUnit();
    char ts[32];
    std::snprintf(ts, sizeof ts, "2018-%02d-%02dT%02d:%02d:00Z", 1 + static_cast<int>(rng.UniformIndex(10)),
                  1 + static_cast<int>(rng.UniformIndex(28)), static_cast<int>(rng.UniformIndex(24)),
                  static_cast<int>(rng.UniformIndex(60)));
    r.created_at = ts;
    if (rng.UniformUnit() < options.targeting_rate) r.targets_raw = Targets(rng, adv);
    out.push_back(std::move(r));
  }
  return out;
}

Dataset SyntheticDataset(const SyntheticOptions& options) {
  std::vector<LabeledAd> labeled;
  for (auto& r : GenerateSyntheticAds(options)) {
    if (const auto label = DeriveLabel(r)) labeled.push_back({std::move(r), *label});
  }
  return Dataset(std::move(labeled));
}

void WriteJsonLines(std::span<const AdRecord> records, std::ostream& out) {
  for (const auto& r : records) out << SerializeRecord(r) << '\n';
}

}  // namespace polads
