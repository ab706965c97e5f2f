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


#include "dielnoise/presets.hpp"

#include <algorithm>

#include "dielnoise/constants.hpp"
#include "dielnoise/errors.hpp"

namespace dielnoise::presets {

namespace {

Scene base_scene(const Vec3& charge, double half_extent, Resolution resolution, double delta_zeta) {
  Scene s;
  s.charge.position = charge;
  s.charge.delta_zeta = delta_zeta;
  const Vec3 h{half_extent, half_extent, half_extent};
  s.domain = {charge - h, charge + h};
  s.grid.rules = GridRules::preset(resolution);
  return s;
}

constexpr double kTwoPiMHz = 2.0 * constants::pi * 1e6;

}  // namespace

Scene fiber_scene(double d, const FiberSpec& fiber, int side, Resolution resolution, double delta_zeta) {
  if (side != -1 && side != 1) throw DomainError("fiber side must be -1 or +1");
  const MaterialDatabase& db = MaterialDatabase::bundled();
  const Material sio2 = db.get("SiO2");
  const Material ta2o5 = db.get("Ta2O5");

  LayeredStack stack;
  stack.top_center = {0.0, 0.0, side * d};
  stack.axis = {0.0, 0.0, -static_cast<double>(side)};
  stack.radius = fiber.radius;
  for (int i = 0; i < fiber.layers; ++i) stack.layers.push_back({i % 2 == 0 ? sio2 : ta2o5, fiber.layer_thickness});
  const double t = stack.total_thickness();

  const Cylinder body{{0.0, 0.0, side * (d + t + 0.5 * fiber.length)}, {0.0, 0.0, 1.0}, fiber.radius, fiber.length};

  const double reach = d + t + fiber.length;
  Scene s = base_scene({0, 0, 0}, std::max(5.5 * d, 1.1 * reach), resolution, delta_zeta);
  s.regions.push_back({"coating", stack, sio2});
  s.regions.push_back({"fiber", body, sio2});
  s.validate();
  return s;
}

std::array<Scene, 2> fiber_pair(double d, Resolution resolution, double delta_zeta) {
  return {fiber_scene(d, FiberSpec{41}, -1, resolution, delta_zeta),
          fiber_scene(d, FiberSpec{47}, +1, resolution, delta_zeta)};
}

LayerStack fiber_stack(const FiberSpec& fiber) {
  const MaterialDatabase& db = MaterialDatabase::bundled();
  const cplx s = complex_permittivity(db.get("SiO2"));
  const cplx t = complex_permittivity(db.get("Ta2O5"));
  LayerStack stack;
  for (int i = 0; i < fiber.layers; ++i) stack.layers.push_back({i % 2 == 0 ? s : t, fiber.layer_thickness});
  stack.substrate = s;
  return stack;
}

Scene plane_validation_scene(double d, Resolution resolution, double delta_zeta) {
  const Material sio2 = MaterialDatabase::bundled().get("SiO2");
  const double radius = 3e-3, thickness = 250e-6;
  Scene s = base_scene({0, 0, d}, std::max(5.5 * d, 1.2 * radius), resolution, delta_zeta);
  s.regions.push_back({"disk", Cylinder{{0, 0, -0.5 * thickness}, {0, 0, 1}, radius, thickness}, sio2});
  s.validate();
  return s;
}

LayerStack plane_validation_stack() {
  LayerStack stack;
  stack.layers.push_back({complex_permittivity(MaterialDatabase::bundled().get("SiO2")), 250e-6});
  return stack;
}

Scene nano_patch_scene(Resolution resolution, double delta_zeta) {
  const Material sio2 = MaterialDatabase::bundled().get("SiO2");
  const double d = 50e-6, radius = 10e-6, thickness = 1e-9;
  Scene s = base_scene({0, 0, d}, 5.5 * d, resolution, delta_zeta);
  s.regions.push_back({"patch", Cylinder{{0, 0, -0.5 * thickness}, {0, 0, 1}, radius, thickness}, sio2});
  s.validate();
  return s;
}

std::vector<DistanceFrequency> distance_table() {
  const double rows[][3] = {{250, 1.669, 0.005}, {265, 1.668, 0.005}, {275, 1.636, 0.005},
                            {300, 1.622, 0.005}, {350, 1.660, 0.005}, {400, 1.644, 0.005},
                            {450, 1.300, 0.008}, {500, 1.696, 0.005}, {600, 1.459, 0.003}};
  std::vector<DistanceFrequency> out;
  for (const auto& r : rows) out.push_back({r[0] * 1e-6, 25e-6, r[1] * kTwoPiMHz, r[2] * kTwoPiMHz});
  return out;
}

std::vector<double> sweep_distances() {
  std::vector<double> out;
  for (const auto& r : distance_table()) {
    if (r.d > 251e-6) out.push_back(r.d);
  }
  return out;
}

ModeSet experiment_modes(double omega_z, double phi_z, double phi_radial) {
  ModeSet m;
  m.mass = constants::mass_ca40;
  m.lambda = 729e-9;
  m.modes = {Mode{kRadialFrequency, phi_radial}, Mode{kRadialFrequency, phi_radial}, Mode{omega_z, phi_z}};
  return m;
}

}  // namespace dielnoise::presets
