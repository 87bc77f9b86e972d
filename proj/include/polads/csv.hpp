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

#include <string>
#include <string_view>
#include <vector>

namespace polads {

// Double-quoted CSV field with embedded quotes doubled.
std::string CsvQuote(std::string_view text);

// Shortest decimal text that reads back to the same double.
std::string CsvNumber(double value);

// Joins already formatted fields with commas and terminates the line.
std::string CsvLine(const std::vector<std::string>& fields);

}  // namespace polads
