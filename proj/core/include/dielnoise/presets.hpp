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

#include <array>
#include <numbers>
#include <vector>

#include "dielnoise/inference.hpp"
#include "dielnoise/layered.hpp"
#include "dielnoise/noise.hpp"
#include "dielnoise/scene.hpp"

namespace dielnoise::presets {

/// Coated fiber: a 300 µm long, 230 µm diameter SiO₂ cylinder whose facet
/// carries `layers` alternating 250 nm SiO₂/Ta₂O₅ layers, SiO₂ outermost.
struct FiberSpec {
  int layers = 41;
  double radius = 115e-6;
  double length = 300e-6;
  double layer_thickness = 250e-9;
};

/// Ion at the origin, fiber facet at distance d. side = -1 puts the fiber
/// below the ion (facet normal +z), side = +1 above it (facet normal -z).
Scene fiber_scene(double d, const FiberSpec& fiber, int side, Resolution resolution,
                  double delta_zeta = kDefaultDeltaZeta);

/// The two fibers of the cavity, each in its own scene: 41 layers below the
/// ion and 47 layers above it.
std::array<Scene, 2> fiber_pair(double d, Resolution resolution, double delta_zeta = kDefaultDeltaZeta);

/// Semi-infinite model of one coated fiber facet: the stack on an SiO₂ substrate.
LayerStack fiber_stack(const FiberSpec& fiber);

/// 6 mm diameter, 250 µm thick SiO₂ disk with the ion at height d above it.
Scene plane_validation_scene(double d, Resolution resolution, double delta_zeta = kDefaultDeltaZeta);
/// Planar counterpart of the validation disk: a 250 µm SiO₂ slab in vacuum.
LayerStack plane_validation_stack();

/// SiO₂ patch of radius 10 µm and thickness 1 nm, ion 50 µm above its face.
Scene nano_patch_scene(Resolution resolution, double delta_zeta = 1e-6);

/// Ion-fiber distances and measured axial frequencies of the distance scan.
std::vector<DistanceFrequency> distance_table();

/// Distances of the simulated fiber sweep (distance table without 250 µm).
std::vector<double> sweep_distances();

inline constexpr double kDistanceBand = 55e-6;
inline constexpr double kRadialFrequency = 2.0 * std::numbers::pi * 3.3e6;

/// Mode set of the fiber experiment at axial frequency omega_z. The laser
/// angles default to 45° for the axial mode and 60° for both radial modes.
ModeSet experiment_modes(double omega_z, double phi_z = 0.25 * std::numbers::pi,
                         double phi_radial = std::numbers::pi / 3.0);

}  // namespace dielnoise::presets
