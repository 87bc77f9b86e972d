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

#ifndef POLADS_TESTS_TEST_UTIL_HPP_
#define POLADS_TESTS_TEST_UTIL_HPP_

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "polads/corpus.hpp"

namespace polads::testing {

inline AdRecord MakeRecord(std::string id, int political, int not_political, std::string advertiser = "adv",
                           std::string message = "message", std::string targets = "") {
  AdRecord r;
  r.id = std::move(id);
  r.title = "";
  r.message = std::move(message);
  r.political_votes = political;
  r.not_political_votes = not_political;
  r.advertiser = std::move(advertiser);
  r.created_at = "2018-06-01T00:00:00Z";
  r.targets_raw = std::move(targets);
  return r;
}

inline LabeledAd MakeAd(std::string id, Label label, std::string advertiser = "adv", std::string message = "message",
                        std::string targets = "") {
  const bool pol = label == Label::kPolitical;
  return {MakeRecord(std::move(id), pol ? 2 : 0, pol ? 0 : 2, std::move(advertiser), std::move(message),
                     std::move(targets)),
          label};
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path TempDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("polads_" + name + "_" + std::to_string(std::random_device{}()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace polads::testing

#endif  // POLADS_TESTS_TEST_UTIL_HPP_
