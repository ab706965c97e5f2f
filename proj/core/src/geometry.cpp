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

#include "dielnoise/geometry.hpp"

#include <algorithm>
#include <numeric>

namespace dielnoise {

bool Box::contains(const Vec3& p) const {
  for (int k = 0; k < 3; ++k) {
    if (p[k] < lo[k] || p[k] > hi[k]) return false;
  }
  return true;
}

bool Box::contains_strictly(const Vec3& p, double margin) const {
  for (int k = 0; k < 3; ++k) {
    if (!(p[k] > lo[k] + margin && p[k] < hi[k] - margin)) return false;
  }
  return true;
}

bool Box::contains(const Box& b) const {
  for (int k = 0; k < 3; ++k) {
    if (b.lo[k] < lo[k] || b.hi[k] > hi[k]) return false;
  }
  return true;
}

double Box::distance(const Vec3& p) const {
  double d2 = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double d = std::max({lo[k] - p[k], 0.0, p[k] - hi[k]});
    d2 += d * d;
  }
  return std::sqrt(d2);
}

bool Cylinder::contains(const Vec3& p) const {
  const Vec3 r = p - center;
  const double t = r.dot(axis);
  if (std::abs(t) > 0.5 * length) return false;
  return r.norm2() - t * t <= radius * radius;
}

double Cylinder::distance(const Vec3& p) const {
  const Vec3 r = p - center;
  const double t = r.dot(axis);
  const double rho = std::sqrt(std::max(r.norm2() - t * t, 0.0));
  const double dt = std::max(std::abs(t) - 0.5 * length, 0.0);
  const double dr = std::max(rho - radius, 0.0);
  return std::hypot(dt, dr);
}

Box Cylinder::bounds() const {
  Box b;
  for (int k = 0; k < 3; ++k) {
    const double a = std::abs(axis[k]);
    const double half = 0.5 * length * a + radius * std::sqrt(std::max(1.0 - a * a, 0.0));
    b.lo[k] = center[k] - half;
    b.hi[k] = center[k] + half;
  }
  return b;
}

std::optional<int> Cylinder::aligned_axis() const {
  for (int k = 0; k < 3; ++k) {
    if (std::abs(axis[k]) > 1.0 - 1e-12) return k;
  }
  return std::nullopt;
}

double LayeredStack::total_thickness() const {
  return std::accumulate(layers.begin(), layers.end(), 0.0,
                         [](double s, const Layer& l) { return s + l.thickness; });
}

Cylinder LayeredStack::layer_cylinder(std::size_t i) const {
  double offset = 0.0;
  for (std::size_t j = 0; j < i; ++j) offset += layers[j].thickness;
  const double t = layers.at(i).thickness;
  return Cylinder{top_center - axis * (offset + 0.5 * t), axis, radius, t};
}

bool Body::contains(const Vec3& p) const {
  return std::visit([&](const auto& s) { return s.contains(p); }, solid);
}

double Body::distance(const Vec3& p) const {
  return std::visit([&](const auto& s) { return s.distance(p); }, solid);
}

Box Body::bounds() const {
  return std::visit(
      [](const auto& s) -> Box {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Box>) {
          return s;
        } else {
          return s.bounds();
        }
      },
      solid);
}

std::vector<Body> DielectricRegion::bodies(int region_index) const {
  std::vector<Body> out;
  if (const auto* c = std::get_if<Cylinder>(&shape)) {
    out.push_back(Body{*c, material, region_index, -1});
  } else if (const auto* b = std::get_if<Box>(&shape)) {
    out.push_back(Body{*b, material, region_index, -1});
  } else {
    const auto& stack = std::get<LayeredStack>(shape);
    for (std::size_t i = 0; i < stack.layers.size(); ++i) {
      out.push_back(Body{stack.layer_cylinder(i), stack.layers[i].material, region_index,
                         static_cast<int>(i)});
    }
  }
  return out;
}

double DielectricRegion::distance(const Vec3& p) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& b : bodies(0)) d = std::min(d, b.distance(p));
  return d;
}

Box DielectricRegion::bounds() const {
  auto parts = bodies(0);
  Box box = parts.front().bounds();
  for (const auto& b : parts) {
    const Box bb = b.bounds();
    for (int k = 0; k < 3; ++k) {
      box.lo[k] = std::min(box.lo[k], bb.lo[k]);
      box.hi[k] = std::max(box.hi[k], bb.hi[k]);
    }
  }
  return box;
}

namespace {

double interval_overlap(double a0, double a1, double b0, double b1) {
  return std::min(a1, b1) - std::max(a0, b0);
}

double feature_size(const Body& b) {
  const Vec3 e = b.bounds().extent();
  return std::min({e.x, e.y, e.z});
}

}  // namespace

bool bodies_overlap(const Body& a, const Body& b) {
  const double tol = 1e-9 * std::min(feature_size(a), feature_size(b));
  const auto* ca = std::get_if<Cylinder>(&a.solid);
  const auto* cb = std::get_if<Cylinder>(&b.solid);
  if (ca && cb && std::abs(std::abs(ca->axis.dot(cb->axis)) - 1.0) < 1e-12) {
    const Vec3& ax = ca->axis;
    const double ta = ca->center.dot(ax);
    const double tb = cb->center.dot(ax);
    const double along = interval_overlap(ta - 0.5 * ca->length, ta + 0.5 * ca->length,
                                          tb - 0.5 * cb->length, tb + 0.5 * cb->length);
    const Vec3 sep = cb->center - ca->center;
    const double lateral = std::sqrt(std::max(sep.norm2() - sep.dot(ax) * sep.dot(ax), 0.0));
    return along > tol && lateral < ca->radius + cb->radius - tol;
  }
  const Box ba = a.bounds();
  const Box bb = b.bounds();
  Box inter;
  for (int k = 0; k < 3; ++k) {
    inter.lo[k] = std::max(ba.lo[k], bb.lo[k]);
    inter.hi[k] = std::min(ba.hi[k], bb.hi[k]);
    if (inter.hi[k] - inter.lo[k] <= tol) return false;
  }
  if (std::holds_alternative<Box>(a.solid) && std::holds_alternative<Box>(b.solid)) return true;
  // Mixed or skew shapes: probe the bounding-box intersection.
  constexpr int n = 16;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const Vec3 p{inter.lo.x + (i + 0.5) / n * (inter.hi.x - inter.lo.x),
                     inter.lo.y + (j + 0.5) / n * (inter.hi.y - inter.lo.y),
                     inter.lo.z + (k + 0.5) / n * (inter.hi.z - inter.lo.z)};
        if (a.contains(p) && b.contains(p)) return true;
      }
    }
  }
  return false;
}

}  // namespace dielnoise
