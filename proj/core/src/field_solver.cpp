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

#include "dielnoise/field_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "dielnoise/constants.hpp"
#include "dielnoise/errors.hpp"

namespace dielnoise {
namespace {

using Clock = std::chrono::steady_clock;

struct Solid {
  std::variant<Cylinder, Box> shape;
  bool contains(const Vec3& p) const {
    return std::visit([&](const auto& s) { return s.contains(p); }, shape);
  }
  Box bounds() const {
    return std::visit(
        [](const auto& s) -> Box {
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Box>) {
            return s;
          } else {
            return s.bounds();
          }
        },
        shape);
  }
};

int material_index(std::vector<Material>& materials, const Material& m) {
  auto it = std::find(materials.begin(), materials.end(), m);
  if (it != materials.end()) return static_cast<int>(it - materials.begin());
  materials.push_back(m);
  return static_cast<int>(materials.size()) - 1;
}

}  // namespace

FieldProblem::FieldProblem(Scene scene, SolverOptions options)
    : scene_(std::move(scene)), options_(options) {
  scene_.validate();
  const bool resolved = options_.stack_model == StackModel::Resolved;
  grid_ = build_grid(scene_, resolved);

  std::vector<Solid> solids;
  for (std::size_t r = 0; r < scene_.regions.size(); ++r) {
    const auto& region = scene_.regions[r];
    const auto* stack = std::get_if<LayeredStack>(&region.shape);
    if (stack && !resolved) {
      const double t = stack->total_thickness();
      const Cylinder whole{stack->top_center - stack->axis * (0.5 * t), stack->axis, stack->radius, t};
      const auto axis = whole.aligned_axis();
      if (!axis) throw DomainError("effective-medium stacks must be aligned with a grid axis");
      Medium m;
      m.region = static_cast<int>(r);
      m.stack_axis = *axis;
      double inv_normal = 0.0, lateral = 0.0;
      for (const auto& layer : stack->layers) {
        inv_normal += layer.thickness / layer.material.eps_r;
        lateral += layer.thickness * layer.material.eps_r;
        const int mi = material_index(materials_, layer.material);
        auto part = std::find_if(m.parts.begin(), m.parts.end(), [&](auto& p) { return p.first == mi; });
        if (part == m.parts.end()) m.parts.emplace_back(mi, layer.thickness / t);
        else part->second += layer.thickness / t;
      }
      m.eps = {lateral / t, lateral / t, lateral / t};
      m.eps[*axis] = t / inv_normal;
      media_.push_back(std::move(m));
      solids.push_back(Solid{whole});
      continue;
    }
    for (const auto& body : region.bodies(static_cast<int>(r))) {
      Medium m;
      m.region = static_cast<int>(r);
      m.eps = {body.material.eps_r, body.material.eps_r, body.material.eps_r};
      m.parts.emplace_back(material_index(materials_, body.material), 1.0);
      media_.push_back(std::move(m));
      solids.push_back(Solid{body.solid});
    }
  }

  const int nx = grid_.cells(0), ny = grid_.cells(1), nz = grid_.cells(2);
  cell_medium_.assign(grid_.cell_count(), -1);
  for (std::size_t s = 0; s < solids.size(); ++s) {
    const Box bb = solids[s].bounds();
    const int i0 = grid_.locate(0, bb.lo.x), i1 = grid_.locate(0, bb.hi.x);
    const int j0 = grid_.locate(1, bb.lo.y), j1 = grid_.locate(1, bb.hi.y);
    const int k0 = grid_.locate(2, bb.lo.z), k1 = grid_.locate(2, bb.hi.z);
    for (int i = i0; i <= i1; ++i) {
      for (int j = j0; j <= j1; ++j) {
        for (int k = k0; k <= k1; ++k) {
          const std::size_t n = grid_.index(i, j, k);
          if (cell_medium_[n] < 0 && solids[s].contains(grid_.center(i, j, k))) {
            cell_medium_[n] = static_cast<int>(s);
          }
        }
      }
    }
  }

  op_ = Stencil7(nx, ny, nz);
  const int dims[3] = {nx, ny, nz};
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      for (int k = 0; k < nz; ++k) {
        const std::size_t n = grid_.index(i, j, k);
        const int idx[3] = {i, j, k};
        const double w[3] = {grid_.width(0, i), grid_.width(1, j), grid_.width(2, k)};
        for (int a = 0; a < 3; ++a) {
          const double area = w[(a + 1) % 3] * w[(a + 2) % 3];
          const double half = 0.5 * w[a] / eps_of(n, a);
          if (idx[a] == 0) op_.diag[n] += area / half;
          if (idx[a] == dims[a] - 1) {
            op_.diag[n] += area / half;
            continue;
          }
          int nb[3] = {i, j, k};
          ++nb[a];
          const std::size_t m = grid_.index(nb[0], nb[1], nb[2]);
          const double half_m = 0.5 * grid_.width(a, nb[a]) / eps_of(m, a);
          const double t = area / (half + half_m);
          (a == 0 ? op_.cx : a == 1 ? op_.cy : op_.cz)[n] = t;
          op_.diag[n] += t;
          op_.diag[m] += t;
        }
      }
    }
  }
}

double FieldProblem::eps_of(std::size_t cell, int axis) const {
  const int m = cell_medium_[cell];
  return m < 0 ? 1.0 : media_[m].eps[axis];
}

double FieldProblem::vacuum_potential(const std::vector<Source>& sources, const Vec3& r) const {
  const double floor = 1e-3 * grid_.min_width();
  double v = 0.0;
  for (const auto& s : sources) v += s.weight / std::max((r - s.position).norm(), floor);
  return constants::coulomb_k * scene_.charge.q * v;
}

std::vector<double> FieldProblem::solve_sources(const std::vector<Source>& sources,
                                                SolveStats& stats) const {
  const auto t0 = Clock::now();
  const int nx = grid_.cells(0), ny = grid_.cells(1), nz = grid_.cells(2);
  const int dims[3] = {nx, ny, nz};
  const std::size_t count = grid_.cell_count();

  std::vector<double> psi(count);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      for (int k = 0; k < nz; ++k) psi[grid_.index(i, j, k)] = vacuum_potential(sources, grid_.center(i, j, k));
    }
  }

  const bool reaction = options_.charge_model == ChargeModel::ReactionField;
  std::vector<double> b(count, 0.0);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      for (int k = 0; k < nz; ++k) {
        const std::size_t n = grid_.index(i, j, k);
        const int idx[3] = {i, j, k};
        const double w[3] = {grid_.width(0, i), grid_.width(1, j), grid_.width(2, k)};
        for (int a = 0; a < 3; ++a) {
          const double area = w[(a + 1) % 3] * w[(a + 2) % 3];
          for (int side = 0; side < 2; ++side) {
            const bool boundary = side == 0 ? idx[a] == 0 : idx[a] == dims[a] - 1;
            if (boundary) {
              Vec3 face = grid_.center(i, j, k);
              face[a] = grid_.faces[a][side == 0 ? idx[a] : idx[a] + 1];
              const double psi_b = vacuum_potential(sources, face);
              const double t = area / (0.5 * w[a] / eps_of(n, a));
              if (reaction) {
                const double tv = area / (0.5 * w[a]);
                b[n] += (tv - t) * (psi[n] - psi_b);
              } else {
                b[n] += t * psi_b;
              }
            } else if (reaction && side == 1) {
              int nb[3] = {i, j, k};
              ++nb[a];
              const std::size_t m = grid_.index(nb[0], nb[1], nb[2]);
              if (cell_medium_[n] < 0 && cell_medium_[m] < 0) continue;
              const double t = (a == 0 ? op_.cx : a == 1 ? op_.cy : op_.cz)[n];
              const double tv = area / (0.5 * (w[a] + grid_.width(a, nb[a])));
              const double flux = (tv - t) * (psi[n] - psi[m]);
              b[n] += flux;
              b[m] -= flux;
            }
          }
        }
      }
    }
  }

  std::vector<double> x(count, 0.0);
  if (!reaction) {
    // Trilinear deposition onto the surrounding cell centres.
    for (const auto& s : sources) {
      int lo[3];
      double frac[3];
      for (int a = 0; a < 3; ++a) {
        const int c = grid_.cells(a);
        int i0 = grid_.locate(a, s.position[a]);
        if (s.position[a] < grid_.center(a, i0)) --i0;
        if (i0 < 0) {
          lo[a] = 0;
          frac[a] = 0.0;
        } else if (i0 >= c - 1) {
          lo[a] = c - 2;
          frac[a] = 1.0;
        } else {
          lo[a] = i0;
          frac[a] = (s.position[a] - grid_.center(a, i0)) / (grid_.center(a, i0 + 1) - grid_.center(a, i0));
        }
      }
      const double qv = scene_.charge.q * s.weight / constants::eps0;
      for (int di = 0; di < 2; ++di) {
        for (int dj = 0; dj < 2; ++dj) {
          for (int dk = 0; dk < 2; ++dk) {
            const double wgt = (di ? frac[0] : 1 - frac[0]) * (dj ? frac[1] : 1 - frac[1]) *
                               (dk ? frac[2] : 1 - frac[2]);
            b[grid_.index(lo[0] + di, lo[1] + dj, lo[2] + dk)] += qv * wgt;
          }
        }
      }
    }
    x = psi;
  }

  const PcgResult res =
      solve_pcg(op_, b, x, options_.relative_tolerance, options_.max_iterations, options_.preconditioner);
  if (!res.converged) {
    throw ConvergenceError("field solve did not converge: relative residual " +
                           std::to_string(res.relative_residual) + " after " +
                           std::to_string(res.iterations) + " iterations");
  }
  if (reaction) {
    for (std::size_t n = 0; n < count; ++n) x[n] += psi[n];
  }
  stats.solves += 1;
  stats.iterations += res.iterations;
  stats.relative_residual = std::max(stats.relative_residual, res.relative_residual);
  stats.unknowns = count;
  stats.seconds += std::chrono::duration<double>(Clock::now() - t0).count();
  return x;
}

Vec3 FieldProblem::cell_field(const std::vector<double>& phi, const std::vector<Source>& sources,
                              std::size_t n) const {
  const auto [i, j, k] = grid_.ijk(n);
  const int idx[3] = {i, j, k};
  Vec3 e;
  if (options_.charge_model == ChargeModel::ReactionField && cell_medium_[n] < 0) {
    bool interior = true;
    for (int a = 0; a < 3 && interior; ++a) {
      for (int side = -1; side <= 1; side += 2) {
        int nb[3] = {i, j, k};
        nb[a] += side;
        if (nb[a] >= 0 && nb[a] < grid_.cells(a) && cell_medium_[grid_.index(nb[0], nb[1], nb[2])] >= 0) {
          interior = false;
        }
      }
    }
    if (interior) return vacuum_field(sources, grid_.center(i, j, k)) + reaction_gradient(phi, sources, n);
  }
  for (int a = 0; a < 3; ++a) {
    const double h = grid_.width(a, idx[a]);
    const double half = 0.5 * h / eps_of(n, a);
    double d[2];
    for (int side = 0; side < 2; ++side) {
      int nb[3] = {i, j, k};
      nb[a] += side == 0 ? -1 : 1;
      double phi_nb, r_nb;
      if (nb[a] < 0 || nb[a] >= grid_.cells(a)) {
        Vec3 face = grid_.center(i, j, k);
        face[a] = grid_.faces[a][side == 0 ? idx[a] : idx[a] + 1];
        phi_nb = vacuum_potential(sources, face);
        r_nb = 0.0;
      } else {
        const std::size_t m = grid_.index(nb[0], nb[1], nb[2]);
        phi_nb = phi[m];
        r_nb = 0.5 * grid_.width(a, nb[a]) / eps_of(m, a);
      }
      // D·â / ε₀ through the face, positive along +a.
      d[side] = side == 0 ? (phi_nb - phi[n]) / (half + r_nb) : (phi[n] - phi_nb) / (half + r_nb);
    }
    e[a] = 0.5 * (d[0] + d[1]) / eps_of(n, a);
  }
  return e;
}

Vec3 FieldProblem::vacuum_field(const std::vector<Source>& sources, const Vec3& r) const {
  const double floor = 1e-3 * grid_.min_width();
  Vec3 e;
  for (const auto& s : sources) {
    const Vec3 d = r - s.position;
    const double n = std::max(d.norm(), floor);
    e = e + d * (s.weight / (n * n * n));
  }
  return e * (constants::coulomb_k * scene_.charge.q);
}

Vec3 FieldProblem::reaction_gradient(const std::vector<double>& phi, const std::vector<Source>& sources,
                                     std::size_t n) const {
  const auto [i, j, k] = grid_.ijk(n);
  const int idx[3] = {i, j, k};
  const Vec3 rc = grid_.center(i, j, k);
  const double s_c = phi[n] - vacuum_potential(sources, rc);
  Vec3 e;
  for (int a = 0; a < 3; ++a) {
    // The reaction potential vanishes on the outer boundary.
    double s_nb[2], x_nb[2];
    for (int side = 0; side < 2; ++side) {
      int nb[3] = {i, j, k};
      nb[a] += side == 0 ? -1 : 1;
      if (nb[a] < 0 || nb[a] >= grid_.cells(a)) {
        s_nb[side] = 0.0;
        x_nb[side] = grid_.faces[a][side == 0 ? idx[a] : idx[a] + 1];
      } else {
        const Vec3 r = grid_.center(nb[0], nb[1], nb[2]);
        s_nb[side] = phi[grid_.index(nb[0], nb[1], nb[2])] - vacuum_potential(sources, r);
        x_nb[side] = r[a];
      }
    }
    // Second-order gradient on a nonuniform three-point stencil.
    const double hl = rc[a] - x_nb[0], hr = x_nb[1] - rc[a];
    const double grad = (hl * hl * (s_nb[1] - s_c) + hr * hr * (s_c - s_nb[0])) / (hl * hr * (hl + hr));
    e[a] = -grad;
  }
  return e;
}

FieldSolution FieldProblem::solve(const Vec3& charge_at) const {
  if (!scene_.domain.contains_strictly(charge_at)) {
    throw DomainError("charge position is outside the domain");
  }
  for (const auto& r : scene_.regions) {
    if (!(r.distance(charge_at) > 0.0)) {
      throw GeometryError("charge position lies inside region '" + r.name + "'");
    }
  }
  FieldSolution sol;
  sol.grid = grid_;
  sol.charge = scene_.charge;
  sol.charge.position = charge_at;
  const std::vector<Source> sources{{charge_at, 1.0}};
  sol.potential = solve_sources(sources, sol.stats);
  sol.e_field.resize(grid_.cell_count());
  for (std::size_t n = 0; n < sol.e_field.size(); ++n) sol.e_field[n] = cell_field(sol.potential, sources, n);
  return sol;
}

PerturbationField FieldProblem::perturbation(const Vec3& axis_in) const {
  const double norm = axis_in.norm();
  if (!(norm > 0.0)) throw DomainError("displacement axis must be non-zero");
  const Vec3 axis = axis_in * (1.0 / norm);
  const double delta = scene_.charge.delta_zeta;
  const Vec3 r0 = scene_.charge.position;

  PerturbationField pf;
  pf.grid = grid_;
  pf.media = media_;
  pf.materials = materials_;
  pf.regions = scene_.regions;
  pf.axis = axis;
  pf.delta_zeta = delta;
  pf.q = scene_.charge.q;
  for (std::size_t n = 0; n < cell_medium_.size(); ++n) {
    if (cell_medium_[n] >= 0) pf.cells.push_back(n);
  }
  if (pf.cells.empty()) return pf;

  std::vector<Source> sources;
  if (options_.displacement == DisplacementScheme::Central) {
    sources = {{r0 + axis * delta, 0.5}, {r0 - axis * delta, -0.5}};
  } else {
    sources = {{r0 + axis * delta, 1.0}, {r0, -1.0}};
  }
  for (const auto& s : sources) {
    if (!scene_.domain.contains_strictly(s.position)) throw DomainError("displaced charge leaves the domain");
  }

  std::vector<double> phi;
  if (options_.method == PerturbationMethod::Linearized) {
    phi = solve_sources(sources, pf.stats);
  } else {
    phi.assign(grid_.cell_count(), 0.0);
    for (const auto& s : sources) {
      const auto single = solve_sources({{s.position, 1.0}}, pf.stats);
      for (std::size_t n = 0; n < phi.size(); ++n) phi[n] += s.weight * single[n];
    }
  }
  pf.e1.reserve(pf.cells.size());
  pf.cell_medium.reserve(pf.cells.size());
  for (std::size_t n : pf.cells) {
    pf.e1.push_back(cell_field(phi, sources, n));
    pf.cell_medium.push_back(cell_medium_[n]);
  }
  return pf;
}

std::vector<double> FieldProblem::net_flux(const FieldSolution& solution) const {
  const std::vector<Source> sources{{solution.charge.position, 1.0}};
  const std::size_t count = grid_.cell_count();
  std::vector<double> flux(count, 0.0);
  for (std::size_t n = 0; n < count; ++n) {
    const auto [i, j, k] = grid_.ijk(n);
    const int idx[3] = {i, j, k};
    const double w[3] = {grid_.width(0, i), grid_.width(1, j), grid_.width(2, k)};
    for (int a = 0; a < 3; ++a) {
      const double area = w[(a + 1) % 3] * w[(a + 2) % 3];
      const double half = 0.5 * w[a] / eps_of(n, a);
      for (int side = 0; side < 2; ++side) {
        int nb[3] = {i, j, k};
        nb[a] += side == 0 ? -1 : 1;
        if (nb[a] < 0 || nb[a] >= grid_.cells(a)) {
          Vec3 face = grid_.center(i, j, k);
          face[a] = grid_.faces[a][side == 0 ? idx[a] : idx[a] + 1];
          flux[n] += area * (solution.potential[n] - vacuum_potential(sources, face)) / half;
        } else {
          const std::size_t m = grid_.index(nb[0], nb[1], nb[2]);
          const double r = half + 0.5 * grid_.width(a, nb[a]) / eps_of(m, a);
          flux[n] += area * (solution.potential[n] - solution.potential[m]) / r;
        }
      }
    }
    flux[n] *= constants::eps0;
  }
  return flux;
}

FieldSolution solve_potential(const Scene& scene, const Vec3& charge_at, const SolverOptions& options) {
  return FieldProblem(scene, options).solve(charge_at);
}

PerturbationField perturbation_field(const Scene& scene, const SolverOptions& options) {
  return FieldProblem(scene, options).perturbation();
}

LossBreakdown loss_breakdown(const PerturbationField& pf) {
  LossBreakdown out;
  out.materials = pf.materials;
  for (const auto& r : pf.regions) out.regions.push_back(r.name);
  out.integral.assign(pf.regions.size(), std::vector<double>(pf.materials.size(), 0.0));
  for (std::size_t c = 0; c < pf.cells.size(); ++c) {
    const auto [i, j, k] = pf.grid.ijk(pf.cells[c]);
    const double vol = pf.grid.volume(i, j, k);
    const Vec3& e = pf.e1[c];
    const Medium& m = pf.media[pf.cell_medium[c]];
    auto& row = out.integral[m.region];
    if (m.stack_axis < 0) {
      row[m.parts.front().first] += e.norm2() * vol;
      continue;
    }
    const int a = m.stack_axis;
    const double d_normal = m.eps[a] * e[a];
    const double e_tangential2 = e.norm2() - e[a] * e[a];
    for (const auto& [mat, frac] : m.parts) {
      const double e_normal = d_normal / pf.materials[mat].eps_r;
      row[mat] += frac * vol * (e_tangential2 + e_normal * e_normal);
    }
  }
  return out;
}

double LossBreakdown::region_total(std::size_t r) const {
  double s = 0.0;
  for (double v : integral.at(r)) s += v;
  return s;
}

double LossBreakdown::material_total(std::size_t m) const {
  double s = 0.0;
  for (const auto& row : integral) s += row.at(m);
  return s;
}

double LossBreakdown::total() const {
  double s = 0.0;
  for (std::size_t r = 0; r < integral.size(); ++r) s += region_total(r);
  return s;
}

double loss_integral(const PerturbationField& pf, std::size_t region_index) {
  if (region_index >= pf.regions.size()) throw DomainError("region is not part of the field's scene");
  return loss_breakdown(pf).region_total(region_index);
}

double loss_integral(const PerturbationField& pf, const DielectricRegion& region) {
  auto it = std::find(pf.regions.begin(), pf.regions.end(), region);
  if (it == pf.regions.end()) throw DomainError("region is not part of the field's scene");
  return loss_integral(pf, static_cast<std::size_t>(it - pf.regions.begin()));
}

ConvergenceReport grid_convergence(const Scene& scene, const SolverOptions& options, double factor) {
  if (scene.grid.faces) throw DomainError("grid convergence needs automatic grid rules");
  ConvergenceReport rep;
  FieldProblem base(scene, options);
  rep.coarse = loss_breakdown(base.perturbation()).total();
  rep.coarse_cells = base.grid().cell_count();
  Scene fine = scene;
  fine.grid.rules.refinement *= factor;
  FieldProblem refined(fine, options);
  rep.fine = loss_breakdown(refined.perturbation()).total();
  rep.fine_cells = refined.grid().cell_count();
  rep.relative_change = rep.coarse > 0 ? (rep.fine - rep.coarse) / rep.fine : 0.0;
  return rep;
}

}  // namespace dielnoise
