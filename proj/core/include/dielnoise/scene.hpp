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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dielnoise/constants.hpp"
#include "dielnoise/geometry.hpp"
#include "dielnoise/material.hpp"

namespace dielnoise {

/// Oscillating point charge. The charge moves along `displacement_axis`
/// with amplitude `delta_zeta`.
struct Charge {
  double q = constants::e;
  double mass = constants::mass_ca40;
  Vec3 position;
  Vec3 displacement_axis{0, 0, 1};
  double delta_zeta = 5e-6;

  friend bool operator==(const Charge&, const Charge&) = default;
};

inline constexpr double kDefaultDeltaZeta = 5e-6;

/// Named resolution levels of the automatic grid generator.
enum class Resolution { Coarse, Paper };

/// Rules for the automatic nonuniform tensor-product grid.
struct GridRules {
  /// Cells across the charge-to-body distance near each body's closest point.
  double cells_per_distance = 6.0;
  /// Maximum ratio between neighbouring cell widths.
  double growth = 1.3;
  /// Minimum cells across the thinnest dimension of every body.
  int min_cells_per_layer = 2;
  /// Cells across the radius of every cylinder (controls staircasing).
  double cells_per_radius = 8.0;
  /// Upper bound on any cell width as a fraction of the domain extent.
  double max_cell_fraction = 0.08;
  /// Divides every target cell size; 2 halves the spacing near bodies.
  double refinement = 1.0;

  static GridRules preset(Resolution r);
  friend bool operator==(const GridRules&, const GridRules&) = default;
};

/// Either explicit per-axis cell-face coordinates or automatic rules.
struct GridSpec {
  std::optional<std::array<std::vector<double>, 3>> faces;
  GridRules rules;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct Scene {
  Charge charge;
  std::vector<DielectricRegion> regions;
  Box domain;
  GridSpec grid;

  /// All regions decomposed into homogeneous bodies, in region order.
  std::vector<Body> bodies() const;
  /// Distance from the charge to the closest region (infinity if none).
  double nearest_region_distance() const;
  /// Throws GeometryError / DomainError when an invariant is violated.
  void validate() const;
  /// Copy with all lengths (geometry, charge position, δζ, domain, explicit
  /// grid) multiplied by `s`.
  Scene scaled(double s) const;
  /// Copy whose charge is displaced along `axis` (normalised).
  Scene with_axis(const Vec3& axis) const;

  friend bool operator==(const Scene&, const Scene&) = default;
};

/// Parses a scene description document (JSON) and validates it. Material
/// names resolve against the document's own "materials" section first and
/// then `db`.
Scene build_scene(std::string_view json_text,
                  const MaterialDatabase& db = MaterialDatabase::bundled());

/// Serialises a scene to the same document format (materials inline).
std::string scene_to_json(const Scene& scene);

}  // namespace dielnoise
