// Copyright 2026 The dielnoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>

// Parsing of quantities written with an explicit unit suffix ("250um",
// "1.3MHz", "300K"). Values are returned in SI base units.
namespace dielnoise::units {

enum class Dimension { Length, Frequency, Temperature, Charge, Mass, Time };

/// Parses `text` as a number followed by a unit suffix of the given
/// dimension. Throws ConfigError for a missing or mismatched suffix.
double parse(std::string_view text, Dimension dim);

inline double length(std::string_view text) { return parse(text, Dimension::Length); }
inline double frequency(std::string_view text) { return parse(text, Dimension::Frequency); }
inline double temperature(std::string_view text) { return parse(text, Dimension::Temperature); }
inline double charge(std::string_view text) { return parse(text, Dimension::Charge); }
inline double mass(std::string_view text) { return parse(text, Dimension::Mass); }
inline double time(std::string_view text) { return parse(text, Dimension::Time); }

/// Formats an SI value with the base-unit suffix so that parse() returns
/// the identical double.
std::string format(double si_value, Dimension dim);

}  // namespace dielnoise::units
