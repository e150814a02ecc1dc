// Copyright 2026 The catqudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CATQUDIT_TEXT_HPP
#define CATQUDIT_TEXT_HPP

#include <string>
#include <string_view>
#include <vector>

namespace catqudit {

// Locale-independent number formatting and parsing. All text files written
// by the library go through these so '.' is always the decimal separator.

/// Shortest representation that round-trips to the same double.
std::string format_double(double value);

/// Fixed `%.{digits}g`-style output.
std::string format_double(double value, int significant_digits);

/// Parses the whole of `text` as a double; throws std::invalid_argument.
double parse_double(std::string_view text);

/// Parses the whole of `text` as an int; throws std::invalid_argument.
int parse_int(std::string_view text);

std::string_view trim(std::string_view text);

std::vector<std::string> split(std::string_view text, char separator);

}  // namespace catqudit

#endif  // CATQUDIT_TEXT_HPP
