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
#include <string>
#include <vector>

#include "dielnoise/grid.hpp"
#include "dielnoise/pcg.hpp"
#include "dielnoise/scene.hpp"

namespace dielnoise {

/// How the point charge enters the discrete problem.
enum class ChargeModel {
  /// Solve only for the field induced by the dielectrics; the vacuum
  /// Coulomb potential is added analytically. No charge singularity on
  /// the grid.
  ReactionField,
  /// Deposit the charge trilinearly onto the eight surrounding cells and
  /// solve for the total potential.
  CloudInCell,
};

/// Finite-difference stencil in the charge position used for E1.
enum class DisplacementScheme {
  /// E1 = [E(r + δζ ζ̂) − E(r − δζ ζ̂)] / 2, second order in δζ.
  Central,
  /// E1 = E(r + δζ ζ̂) − E(r), first order in δζ.
  Forward,
};

enum class StackModel {
  /// Every layer is a body of its own and must be resolved by the grid.
  Resolved,
  /// Each layered stack becomes one uniaxial body (in-plane ε arithmetic,
  /// normal ε harmonic mean); per-material losses are recovered from the
  /// continuity of tangential E and normal D.
  EffectiveMedium,
};

enum class PerturbationMethod {
  /// One solve whose source is the difference of the displaced charges.
  Linearized,
  /// Separate solves at each charge position, subtracted afterwards.
  DifferenceOfSolves,
};

struct SolverOptions {
  double relative_tolerance = 1e-8;
  int max_iterations = 50000;
  ChargeModel charge_model = ChargeModel::ReactionField;
  DisplacementScheme displacement = DisplacementScheme::Central;
  StackModel stack_model = StackModel::Resolved;
  PerturbationMethod method = PerturbationMethod::Linearized;
  Preconditioner preconditioner = Preconditioner::IncompleteCholesky;
};

struct SolveStats {
  int solves = 0;
  int iterations = 0;
  double relative_residual = 0.0;
  std::size_t unknowns = 0;
  double seconds = 0.0;
};

/// Dielectric filling of a cell.
struct Medium {
  std::array<double, 3> eps{1.0, 1.0, 1.0};  // relative permittivity per axis
  int region = -1;
  int stack_axis = -1;  // normal axis of a homogenised stack, -1 if isotropic
  std::vector<std::pair<int, double>> parts;  // (material index, volume fraction)
};

struct FieldSolution {
  TensorGrid grid;
  std::vector<double> potential;  // V at cell centres
  std::vector<Vec3> e_field;      // V/m at cell centres
  Charge charge;                  // position = where the charge was placed
  SolveStats stats;
};

/// E1 restricted to the cells inside dielectric regions.
struct PerturbationField {
  TensorGrid grid;
  std::vector<std::size_t> cells;
  std::vector<Vec3> e1;
  std::vector<int> cell_medium;
  std::vector<Medium> media;
  std::vector<Material> materials;
  std::vector<DielectricRegion> regions;
  Vec3 axis;
  double delta_zeta = 0.0;
  double q = 0.0;
  SolveStats stats;
};

/// Discretised electrostatic problem of one scene. The grid and operator
/// are built once and shared by every solve.
class FieldProblem {
 public:
  explicit FieldProblem(Scene scene, SolverOptions options = {});

  const Scene& scene() const { return scene_; }
  const TensorGrid& grid() const { return grid_; }
  const SolverOptions& options() const { return options_; }
  const std::vector<Medium>& media() const { return media_; }
  const std::vector<Material>& materials() const { return materials_; }
  /// Medium index of a cell, -1 for vacuum.
  int medium_of(std::size_t cell) const { return cell_medium_[cell]; }

  /// Electrostatic solution with the scene's charge placed at `charge_at`.
  FieldSolution solve(const Vec3& charge_at) const;
  /// E1 for a displacement of the scene's charge along `axis` by δζ.
  PerturbationField perturbation(const Vec3& axis) const;
  PerturbationField perturbation() const { return perturbation(scene_.charge.displacement_axis); }

  /// Net outward displacement flux ∮ D·dA of every cell [C].
  std::vector<double> net_flux(const FieldSolution& solution) const;

 private:
  struct Source {
    Vec3 position;
    double weight;
  };
  std::vector<double> solve_sources(const std::vector<Source>& sources, SolveStats& stats) const;
  double vacuum_potential(const std::vector<Source>& sources, const Vec3& r) const;
  Vec3 cell_field(const std::vector<double>& phi, const std::vector<Source>& sources,
                  std::size_t n) const;
  Vec3 vacuum_field(const std::vector<Source>& sources, const Vec3& r) const;
  Vec3 reaction_gradient(const std::vector<double>& phi, const std::vector<Source>& sources,
                         std::size_t n) const;
  double eps_of(std::size_t cell, int axis) const;

  Scene scene_;
  SolverOptions options_;
  TensorGrid grid_;
  std::vector<Material> materials_;
  std::vector<Medium> media_;
  std::vector<int> cell_medium_;
  Stencil7 op_;
};

FieldSolution solve_potential(const Scene& scene, const Vec3& charge_at,
                              const SolverOptions& options = {});
PerturbationField perturbation_field(const Scene& scene, const SolverOptions& options = {});

/// ∫_V |E1|² dV over one region [V² m].
double loss_integral(const PerturbationField& pf, std::size_t region_index);
/// Same, looking the region up by value; throws DomainError if it is not
/// part of the field's scene.
double loss_integral(const PerturbationField& pf, const DielectricRegion& region);

/// ∫|E1|² split by region and by material.
struct LossBreakdown {
  std::vector<Material> materials;
  std::vector<std::string> regions;
  /// [region][material] in V² m.
  std::vector<std::vector<double>> integral;

  double region_total(std::size_t r) const;
  double material_total(std::size_t m) const;
  double total() const;
};
LossBreakdown loss_breakdown(const PerturbationField& pf);

/// Grid-convergence diagnostic: total ∫|E1|² at the scene's rules and with
/// every target spacing divided by `factor`.
struct ConvergenceReport {
  double coarse = 0.0;
  double fine = 0.0;
  double relative_change = 0.0;
  std::size_t coarse_cells = 0;
  std::size_t fine_cells = 0;
};
ConvergenceReport grid_convergence(const Scene& scene, const SolverOptions& options = {},
                                   double factor = 2.0);

}  // namespace dielnoise
