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

#include <numbers>

/// Physical constants in SI units (CODATA 2018). Every module reads its
/// constants from here.
namespace dielnoise::constants {

inline constexpr double pi = std::numbers::pi;

/// ε₀: vacuum permittivity [F/m].
inline constexpr double eps0 = 8.8541878128e-12;

/// k_B: Boltzmann constant [J/K] (exact).
inline constexpr double k_B = 1.380649e-23;

/// ħ: reduced Planck constant [J s].
inline constexpr double hbar = 1.054571817e-34;

/// c: speed of light in vacuum [m/s] (exact).
inline constexpr double c = 299792458.0;

/// e: elementary charge [C] (exact).
inline constexpr double e = 1.602176634e-19;

/// u: atomic mass unit [kg].
inline constexpr double amu = 1.66053906660e-27;

/// 1/(4πε₀) [m/F].
inline constexpr double coulomb_k = 1.0 / (4.0 * pi * eps0);

/// Mass of a singly charged ⁴⁰Ca⁺ ion, taken as 40 u.
inline constexpr double mass_ca40 = 40.0 * amu;

}  // namespace dielnoise::constants
