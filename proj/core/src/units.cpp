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

#include "dielnoise/units.hpp"

#include <array>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "dielnoise/constants.hpp"
#include "dielnoise/errors.hpp"

namespace dielnoise::units {
namespace {

struct Suffix {
  std::string_view text;
  Dimension dim;
  double scale;
};

// Longest suffixes first so that "mm" is not read as "m".
constexpr std::array kSuffixes{
    Suffix{"MHz", Dimension::Frequency, 1e6},
    Suffix{"kHz", Dimension::Frequency, 1e3},
    Suffix{"GHz", Dimension::Frequency, 1e9},
    Suffix{"Hz", Dimension::Frequency, 1.0},
    Suffix{"\xC2\xB5m", Dimension::Length, 1e-6},  // µm
    Suffix{"um", Dimension::Length, 1e-6},
    Suffix{"nm", Dimension::Length, 1e-9},
    Suffix{"mm", Dimension::Length, 1e-3},
    Suffix{"cm", Dimension::Length, 1e-2},
    Suffix{"m", Dimension::Length, 1.0},
    Suffix{"K", Dimension::Temperature, 1.0},
    Suffix{"C", Dimension::Charge, 1.0},
    Suffix{"e", Dimension::Charge, constants::e},
    Suffix{"kg", Dimension::Mass, 1.0},
    Suffix{"u", Dimension::Mass, constants::amu},
    Suffix{"\xC2\xB5s", Dimension::Time, 1e-6},
    Suffix{"us", Dimension::Time, 1e-6},
    Suffix{"ms", Dimension::Time, 1e-3},
    Suffix{"ns", Dimension::Time, 1e-9},
    Suffix{"s", Dimension::Time, 1.0},
};

const char* dimension_name(Dimension dim) {
  switch (dim) {
    case Dimension::Length: return "length";
    case Dimension::Frequency: return "frequency";
    case Dimension::Temperature: return "temperature";
    case Dimension::Charge: return "charge";
    case Dimension::Mass: return "mass";
    case Dimension::Time: return "time";
  }
  return "?";
}

}  // namespace

double parse(std::string_view text, Dimension dim) {
  const std::string buf(text);
  const char* begin = buf.c_str();
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(begin, &end);
  if (end == begin || errno == ERANGE) {
    throw ConfigError("cannot parse quantity '" + buf + "'");
  }
  std::string_view rest(end);
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  if (rest.empty()) {
    throw ConfigError("quantity '" + buf + "' needs a " + dimension_name(dim) + " unit suffix");
  }
  for (const auto& s : kSuffixes) {
    if (rest == s.text) {
      if (s.dim != dim) {
        throw ConfigError("quantity '" + buf + "' is not a " + dimension_name(dim));
      }
      // Base units are returned untouched so format() round-trips exactly.
      return s.scale == 1.0 ? value : value * s.scale;
    }
  }
  throw ConfigError("unknown unit suffix in '" + buf + "'");
}

std::string format(double si_value, Dimension dim) {
  const char* suffix = "";
  switch (dim) {
    case Dimension::Length: suffix = "m"; break;
    case Dimension::Frequency: suffix = "Hz"; break;
    case Dimension::Temperature: suffix = "K"; break;
    case Dimension::Charge: suffix = "C"; break;
    case Dimension::Mass: suffix = "kg"; break;
    case Dimension::Time: suffix = "s"; break;
  }
  char out[64];
  std::snprintf(out, sizeof out, "%.17g%s", si_value, suffix);
  return out;
}

}  // namespace dielnoise::units
