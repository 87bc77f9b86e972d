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

// Writes a synthetic archive dump for demos and tests.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "polads/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic ad archive (newline-delimited JSON)"};
  polads::SyntheticOptions options;
  std::string out;
  app.add_option("-o,--out", out, "Output file; standard output when omitted");
  app.add_option("--ads", options.ads, "Number of ads")->capture_default_str();
  app.add_option("--advertisers", options.advertisers, "Number of advertisers")->capture_default_str();
  app.add_option("--political-share", options.political_share, "Share of political advertisers")
      ->capture_default_str();
  app.add_option("--text-noise", options.text_noise, "Chance a word comes from the other class")
      ->capture_default_str();
  app.add_option("--vote-noise", options.vote_noise, "Chance a volunteer vote is flipped")->capture_default_str();
  app.add_option("--targeting-rate", options.targeting_rate, "Share of ads with targeting")->capture_default_str();
  app.add_option("--seed", options.seed, "Generator seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const auto records = polads::GenerateSyntheticAds(options);
  if (out.empty()) {
    polads::WriteJsonLines(records, std::cout);
    return 0;
  }
  std::ofstream file(out);
  if (!file) {
    std::cerr << "cannot write " << out << "\n";
    return 2;
  }
  polads::WriteJsonLines(records, file);
  return file ? 0 : 1;
}
