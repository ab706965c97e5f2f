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


#include "dielnoise/image_charge.hpp"

#include <cmath>

#include "dielnoise/constants.hpp"
#include "dielnoise/errors.hpp"

namespace dielnoise {
namespace {

void check(double d, double eps_r) {
  if (!(d > 0.0)) throw DomainError("charge height must be positive");
  if (!(eps_r >= 1.0)) throw DomainError("relative permittivity must be >= 1");
}

Vec3 coulomb_field(double q, const Vec3& source, const Vec3& probe) {
  const Vec3 r = probe - source;
  const double n = r.norm();
  return r * (constants::coulomb_k * q / (n * n * n));
}

}  // namespace

Vec3 image_charge_field(double d, double eps_r, double q, const Vec3& probe, ImagePart part) {
  check(d, eps_r);
  if (!(probe.z > 0.0)) throw DomainError("probe must lie in the vacuum half-space z > 0");
  const double q_image = -q * (eps_r - 1.0) / (eps_r + 1.0);
  Vec3 e = coulomb_field(q_image, {0, 0, -d}, probe);
  if (part == ImagePart::Total) e = e + coulomb_field(q, {0, 0, d}, probe);
  return e;
}

double image_charge_potential(double d, double eps_r, double q, const Vec3& probe, ImagePart part) {
  check(d, eps_r);
  if (!(probe.z > 0.0)) throw DomainError("probe must lie in the vacuum half-space z > 0");
  const double q_image = -q * (eps_r - 1.0) / (eps_r + 1.0);
  double v = constants::coulomb_k * q_image / (probe - Vec3{0, 0, -d}).norm();
  if (part == ImagePart::Total) v += constants::coulomb_k * q / (probe - Vec3{0, 0, d}).norm();
  return v;
}

Vec3 image_charge_field_inside(double d, double eps_r, double q, const Vec3& probe) {
  check(d, eps_r);
  if (!(probe.z < 0.0)) throw DomainError("probe must lie in the dielectric half-space z < 0");
  return coulomb_field(2.0 * q / (eps_r + 1.0), {0, 0, d}, probe);
}

}  // namespace dielnoise
