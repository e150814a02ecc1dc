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

#ifndef CATQUDIT_UNITS_HPP
#define CATQUDIT_UNITS_HPP

#include <numbers>

namespace catqudit {

// Internal units are SI: angular frequencies in rad/s, times in seconds.
// Table-style inputs quote f = omega / 2pi, so every frequency helper here
// multiplies by 2pi.

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double ghz(double f) { return kTwoPi * f * 1e9; }
constexpr double mhz(double f) { return kTwoPi * f * 1e6; }
constexpr double khz(double f) { return kTwoPi * f * 1e3; }

constexpr double to_ghz(double omega) { return omega / kTwoPi / 1e9; }
constexpr double to_mhz(double omega) { return omega / kTwoPi / 1e6; }

constexpr double microseconds(double t) { return t * 1e-6; }
constexpr double nanoseconds(double t) { return t * 1e-9; }
constexpr double to_microseconds(double t) { return t * 1e6; }

}  // namespace catqudit

#endif  // CATQUDIT_UNITS_HPP
