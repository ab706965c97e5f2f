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


#include "dielnoise/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "dielnoise/errors.hpp"

namespace dielnoise {

namespace {

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void header(std::ostream& out, const char* kind, const TensorGrid& grid, const Charge& c) {
  out << "# dielnoise " << kind << " v1\n";
  out << "# cells " << grid.cells(0) << ' ' << grid.cells(1) << ' ' << grid.cells(2) << '\n';
  out << "# charge_m " << g(c.position.x) << ' ' << g(c.position.y) << ' ' << g(c.position.z) << " q_C " << g(c.q)
      << '\n';
}

}  // namespace

void write_field_csv(std::ostream& out, const FieldSolution& s) {
  header(out, "field", s.grid, s.charge);
  out << "i,j,k,x_m,y_m,z_m,potential_V,ex_V_per_m,ey_V_per_m,ez_V_per_m\n";
  for (std::size_t n = 0; n < s.potential.size(); ++n) {
    const auto [i, j, k] = s.grid.ijk(n);
    const Vec3 r = s.grid.center(i, j, k);
    const Vec3& e = s.e_field[n];
    out << i << ',' << j << ',' << k << ',' << g(r.x) << ',' << g(r.y) << ',' << g(r.z) << ',' << g(s.potential[n])
        << ',' << g(e.x) << ',' << g(e.y) << ',' << g(e.z) << '\n';
  }
}

void write_field_csv(const std::string& path, const FieldSolution& solution) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  write_field_csv(f, solution);
}

void write_perturbation_csv(std::ostream& out, const PerturbationField& pf) {
  Charge c;
  c.q = pf.q;
  c.displacement_axis = pf.axis;
  c.delta_zeta = pf.delta_zeta;
  header(out, "perturbation", pf.grid, c);
  out << "i,j,k,x_m,y_m,z_m,region,e1x_V_per_m,e1y_V_per_m,e1z_V_per_m\n";
  for (std::size_t m = 0; m < pf.cells.size(); ++m) {
    const auto [i, j, k] = pf.grid.ijk(pf.cells[m]);
    const Vec3 r = pf.grid.center(i, j, k);
    const Vec3& e = pf.e1[m];
    out << i << ',' << j << ',' << k << ',' << g(r.x) << ',' << g(r.y) << ',' << g(r.z) << ','
        << pf.regions[pf.media[pf.cell_medium[m]].region].name << ',' << g(e.x) << ',' << g(e.y) << ',' << g(e.z)
        << '\n';
  }
}

}  // namespace dielnoise
