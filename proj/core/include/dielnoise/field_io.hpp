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

#include <iosfwd>
#include <string>

#include "dielnoise/field_solver.hpp"

namespace dielnoise {

/// Writes a solution as CSV, one row per cell:
///   i,j,k,x_m,y_m,z_m,potential_V,ex_V_per_m,ey_V_per_m,ez_V_per_m
/// preceded by '#' comment lines giving the format version, grid size and
/// charge. Cells are ordered with k fastest.
void write_field_csv(std::ostream& out, const FieldSolution& solution);
void write_field_csv(const std::string& path, const FieldSolution& solution);

/// Same layout for a perturbation field, restricted to dielectric cells:
///   i,j,k,x_m,y_m,z_m,region,e1x_V_per_m,e1y_V_per_m,e1z_V_per_m
void write_perturbation_csv(std::ostream& out, const PerturbationField& field);

}  // namespace dielnoise
