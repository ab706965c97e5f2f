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
#include <cstddef>
#include <vector>

#include "dielnoise/geometry.hpp"

namespace dielnoise {

struct Scene;

/// Nonuniform tensor-product grid of hexahedral cells, described by the
/// cell-face coordinates along each axis. Cell (i, j, k) has linear index
/// (i * ny + j) * nz + k.
struct TensorGrid {
  std::array<std::vector<double>, 3> faces;

  int cells(int axis) const { return static_cast<int>(faces[axis].size()) - 1; }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(cells(0)) * cells(1) * cells(2);
  }
  double center(int axis, int i) const { return 0.5 * (faces[axis][i] + faces[axis][i + 1]); }
  double width(int axis, int i) const { return faces[axis][i + 1] - faces[axis][i]; }
  Vec3 center(int i, int j, int k) const { return {center(0, i), center(1, j), center(2, k)}; }
  double volume(int i, int j, int k) const { return width(0, i) * width(1, j) * width(2, k); }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * cells(1) + j) * cells(2) + k;
  }
  std::array<int, 3> ijk(std::size_t n) const {
    const auto nz = static_cast<std::size_t>(cells(2));
    const auto ny = static_cast<std::size_t>(cells(1));
    return {static_cast<int>(n / (ny * nz)), static_cast<int>((n / nz) % ny), static_cast<int>(n % nz)};
  }
  /// Smallest cell width along any axis.
  double min_width() const;
  /// Index of the cell whose extent along `axis` contains `x` (clamped).
  int locate(int axis, double x) const;

  friend bool operator==(const TensorGrid&, const TensorGrid&) = default;
};

/// Builds the grid for a scene: explicit faces if the scene gives them,
/// otherwise the automatic refinement rules. With `resolve_layers` false,
/// each layered stack is refined as one homogeneous body.
TensorGrid build_grid(const Scene& scene, bool resolve_layers = true);

/// One-dimensional graded node placement used by build_grid: breakpoints
/// always become faces, and the cell width near x stays below
/// min over zones (h + (growth - 1) * dist(x, zone)), capped at h_max.
struct GradingZone {
  double lo, hi, h;
};
std::vector<double> graded_faces(double lo, double hi, std::vector<double> breakpoints,
                                 const std::vector<GradingZone>& zones, double growth, double h_max);

}  // namespace dielnoise
