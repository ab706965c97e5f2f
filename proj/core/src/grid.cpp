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

#include "dielnoise/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dielnoise/errors.hpp"
#include "dielnoise/scene.hpp"

namespace dielnoise {

double TensorGrid::min_width() const {
  double m = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    for (int i = 0; i < cells(a); ++i) m = std::min(m, width(a, i));
  }
  return m;
}

int TensorGrid::locate(int axis, double x) const {
  const auto& f = faces[axis];
  auto it = std::upper_bound(f.begin(), f.end(), x);
  const int i = static_cast<int>(it - f.begin()) - 1;
  return std::clamp(i, 0, cells(axis) - 1);
}

std::vector<double> graded_faces(double lo, double hi, std::vector<double> breakpoints,
                                 const std::vector<GradingZone>& zones, double growth, double h_max) {
  const double slope = growth - 1.0;
  auto size_at = [&](double x) {
    double h = h_max;
    for (const auto& z : zones) {
      const double dist = std::max({z.lo - x, 0.0, x - z.hi});
      h = std::min(h, z.h + slope * dist);
    }
    return h;
  };

  const double merge_tol = 1e-12 * (hi - lo);
  breakpoints.push_back(lo);
  breakpoints.push_back(hi);
  std::sort(breakpoints.begin(), breakpoints.end());
  std::vector<double> bp;
  for (double b : breakpoints) {
    if (b < lo || b > hi) continue;
    if (bp.empty() || b - bp.back() > merge_tol) bp.push_back(b);
  }
  bp.front() = lo;
  bp.back() = hi;

  std::vector<double> faces{lo};
  std::vector<double> xs, cum;
  for (std::size_t s = 0; s + 1 < bp.size(); ++s) {
    const double a = bp[s];
    const double b = bp[s + 1];
    // Cumulative cell count F(x) = ∫ dx / h(x) sampled on a local march.
    xs.assign(1, a);
    cum.assign(1, 0.0);
    double x = a;
    while (x < b) {
      const double h = size_at(x);
      const double step = std::min(h / 16.0, b - x);
      const double xn = (b - x - step) < 1e-9 * step ? b : x + step;
      const double hm = size_at(0.5 * (x + xn));
      cum.push_back(cum.back() + (xn - x) / hm);
      xs.push_back(xn);
      x = xn;
    }
    const double total = cum.back();
    const int n = std::max(1, static_cast<int>(std::ceil(total * (1.0 - 1e-9))));
    std::size_t cursor = 0;
    for (int j = 1; j < n; ++j) {
      const double target = total * j / n;
      while (cum[cursor + 1] < target) ++cursor;
      const double t = (target - cum[cursor]) / (cum[cursor + 1] - cum[cursor]);
      faces.push_back(xs[cursor] + t * (xs[cursor + 1] - xs[cursor]));
    }
    faces.push_back(b);
  }
  return faces;
}

namespace {

struct Feature {
  Box bounds;
  std::optional<int> cylinder_axis;
  double radius = 0.0;
  Vec3 cylinder_center;
};

std::vector<Feature> features(const Scene& scene, bool resolve_layers) {
  std::vector<Feature> out;
  for (const auto& region : scene.regions) {
    const auto* stack = std::get_if<LayeredStack>(&region.shape);
    if (stack && !resolve_layers) {
      const double t = stack->total_thickness();
      const Cylinder whole{stack->top_center - stack->axis * (0.5 * t), stack->axis, stack->radius, t};
      out.push_back({whole.bounds(), whole.aligned_axis(), whole.radius, whole.center});
      continue;
    }
    for (const auto& body : region.bodies(0)) {
      Feature f{body.bounds(), std::nullopt, 0.0, {}};
      if (const auto* c = std::get_if<Cylinder>(&body.solid)) {
        f.cylinder_axis = c->aligned_axis();
        f.radius = c->radius;
        f.cylinder_center = c->center;
      }
      out.push_back(f);
    }
  }
  return out;
}

}  // namespace

TensorGrid build_grid(const Scene& scene, bool resolve_layers) {
  TensorGrid grid;
  if (scene.grid.faces) {
    grid.faces = *scene.grid.faces;
    return grid;
  }
  const GridRules& rules = scene.grid.rules;
  const Vec3 q = scene.charge.position;
  const auto feats = features(scene, resolve_layers);

  for (int axis = 0; axis < 3; ++axis) {
    const double lo = scene.domain.lo[axis];
    const double hi = scene.domain.hi[axis];
    std::vector<double> breaks{q[axis]};
    std::vector<GradingZone> zones;
    for (const auto& f : feats) {
      const double flo = f.bounds.lo[axis];
      const double fhi = f.bounds.hi[axis];
      breaks.push_back(flo);
      breaks.push_back(fhi);
      zones.push_back({flo, fhi, (fhi - flo) / rules.min_cells_per_layer / rules.refinement});

      // Near field: the closest part of each body sees the strongest E1.
      const double d = f.bounds.distance(q);
      if (d > 0.0) {
        const double p = std::clamp(q[axis], flo, fhi);
        zones.push_back({p - 2.0 * d, p + 2.0 * d, d / rules.cells_per_distance / rules.refinement});
      }
      if (f.cylinder_axis && *f.cylinder_axis != axis) {
        const double c = f.cylinder_center[axis];
        zones.push_back({c - f.radius, c + f.radius, f.radius / rules.cells_per_radius / rules.refinement});
      }
    }
    const double h_max = rules.max_cell_fraction * (hi - lo) / rules.refinement;
    grid.faces[axis] = graded_faces(lo, hi, breaks, zones, rules.growth, h_max);
  }
  return grid;
}

}  // namespace dielnoise
