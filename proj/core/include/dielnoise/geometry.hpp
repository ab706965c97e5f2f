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
#include <cmath>
#include <optional>
#include <variant>
#include <vector>

#include "dielnoise/material.hpp"

namespace dielnoise {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  constexpr double norm2() const { return dot(*this); }

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// Axis-aligned box [lo, hi].
struct Box {
  Vec3 lo;
  Vec3 hi;

  bool contains(const Vec3& p) const;
  /// True when p lies inside with a margin of `margin` on every side.
  bool contains_strictly(const Vec3& p, double margin = 0.0) const;
  bool contains(const Box& b) const;
  double distance(const Vec3& p) const;
  Vec3 extent() const { return hi - lo; }

  friend bool operator==(const Box&, const Box&) = default;
};

/// Finite right circular cylinder; `center` is the midpoint of its axis.
struct Cylinder {
  Vec3 center;
  Vec3 axis{0, 0, 1};  // unit vector
  double radius = 0.0;
  double length = 0.0;

  bool contains(const Vec3& p) const;
  double distance(const Vec3& p) const;
  Box bounds() const;
  /// Index 0..2 of the coordinate axis the cylinder is aligned with, if any.
  std::optional<int> aligned_axis() const;

  friend bool operator==(const Cylinder&, const Cylinder&) = default;
};

struct Layer {
  Material material;
  double thickness = 0.0;

  friend bool operator==(const Layer&, const Layer&) = default;
};

/// Coaxial cylindrical layers. `top_center` is the centre of the outermost
/// face and `axis` its outward normal (pointing away from the stack); the
/// layers are listed from that face inwards.
struct LayeredStack {
  Vec3 top_center;
  Vec3 axis{0, 0, 1};
  double radius = 0.0;
  std::vector<Layer> layers;

  double total_thickness() const;
  /// Cylinder occupied by layer `i`.
  Cylinder layer_cylinder(std::size_t i) const;

  friend bool operator==(const LayeredStack&, const LayeredStack&) = default;
};

using Shape = std::variant<Cylinder, Box, LayeredStack>;

/// Homogeneous solid piece of a region: a cylinder or box of one material.
struct Body {
  std::variant<Cylinder, Box> solid;
  Material material;
  int region = 0;
  int layer = -1;  // index inside a LayeredStack, -1 otherwise

  bool contains(const Vec3& p) const;
  double distance(const Vec3& p) const;
  Box bounds() const;
};

struct DielectricRegion {
  std::string name;
  Shape shape;
  /// Material of a Cylinder or Box region; stacks carry one per layer.
  Material material;

  /// Decomposes the region into homogeneous bodies.
  std::vector<Body> bodies(int region_index) const;
  double distance(const Vec3& p) const;
  Box bounds() const;

  friend bool operator==(const DielectricRegion&, const DielectricRegion&) = default;
};

/// True if the interiors of two bodies intersect (touching faces is fine).
bool bodies_overlap(const Body& a, const Body& b);

}  // namespace dielnoise
