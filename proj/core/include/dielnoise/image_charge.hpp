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

#include "dielnoise/geometry.hpp"

namespace dielnoise {

enum class ImagePart { Total, ImageOnly };

/// Field [V/m] in the vacuum half-space z > 0 of a point charge `q` at
/// (0, 0, d) above a dielectric half-space z < 0 with permittivity eps_r.
/// The dielectric response is the image charge
/// q' = -q (eps_r - 1) / (eps_r + 1) at (0, 0, -d).
/// Throws DomainError for probes with z <= 0, d <= 0 or eps_r < 1.
Vec3 image_charge_field(double d, double eps_r, double q, const Vec3& probe,
                        ImagePart part = ImagePart::Total);

/// Potential [V] for the same configuration, at a probe with z > 0.
double image_charge_potential(double d, double eps_r, double q, const Vec3& probe,
                              ImagePart part = ImagePart::Total);

/// Field [V/m] inside the dielectric (z < 0): the charge seen through the
/// interface is q'' = 2 q / (eps_r + 1) located at (0, 0, d).
Vec3 image_charge_field_inside(double d, double eps_r, double q, const Vec3& probe);

}  // namespace dielnoise
