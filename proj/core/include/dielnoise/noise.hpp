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
#include <optional>
#include <string>
#include <vector>

#include "dielnoise/field_solver.hpp"
#include "dielnoise/material.hpp"

namespace dielnoise {

/// Contribution of one material to the noise spectrum.
struct MaterialTerm {
  Material material;
  double loss_integral = 0.0;  // ∫|E₁|² dV over this material [V² m]
  double s_e = 0.0;            // [V² m⁻² Hz⁻¹]
};

struct RegionLoss {
  std::string region;
  double loss_integral = 0.0;
};

struct NoiseResult {
  double omega = 0.0;
  Vec3 axis;
  std::string axis_label;
  double s_e = 0.0;
  std::vector<MaterialTerm> per_material_terms;
  std::vector<RegionLoss> loss_integral_per_region;
  double delta_zeta = 0.0;
  double q = 0.0;
  std::optional<double> heating_rate;  // phonons/s, when a mass is known
};

/// Time-averaged power dissipated in one material [W].
double power_loss(double loss_integral, const Material& material, double omega);
/// Sum over materials of the single-material power loss.
double power_loss(const std::vector<MaterialTerm>& terms, double omega);

/// Re γ = 2 P / (m ω² δζ²) [1/s].
double damping_coefficient(double p_loss, double mass, double omega, double delta_zeta);

/// Noise spectrum from the classical fluctuation-dissipation relation
/// S_E = 4 m k_B T Re γ / q².
double spectral_density_from_damping(double re_gamma, double mass, double temperature, double q);

/// S_E from a loss breakdown, each material at its own temperature unless
/// `temperature` overrides it. Per-material terms sum to s_e exactly.
NoiseResult spectral_density(const LossBreakdown& losses, double delta_zeta, double q, double omega,
                             std::optional<double> temperature = std::nullopt);
NoiseResult spectral_density(const PerturbationField& pf, double omega,
                             std::optional<double> temperature = std::nullopt);

/// ṅ = q² S_E / (4 m ħ ω) [phonons/s].
double heating_rate(double s_e, double omega, double q, double mass);

/// η = (2π/λ) sqrt(ħ / (2 m ω)) cos φ.
double lamb_dicke(double lambda, double mass, double omega, double phi);

struct Mode {
  double omega = 0.0;
  double phi = 0.0;  // angle between mode axis and laser wave vector [rad]
};

/// Motional modes along x, y, z probed by a laser of wavelength `lambda`.
struct ModeSet {
  std::array<Mode, 3> modes;
  double lambda = 729e-9;
  double mass = 0.0;

  double eta(int i) const;
  std::array<double, 3> etas() const;
  void validate() const;
};

double beta_weight(const std::array<double, 3>& nbar, const ModeSet& modes);
double beta_rate(const std::array<double, 3>& nbar_dot, const ModeSet& modes);
/// ṅ_z ≈ β̇ / η_z². An upper bound on the axial rate when radial rates are non-zero.
double project_axial(double beta_dot, double eta_z);

/// Loss breakdown for one displacement axis of a scene; S_E for any ω
/// follows from it without another solve.
struct AxisLoss {
  Vec3 axis;
  LossBreakdown losses;
  double delta_zeta = 0.0;
  double q = 0.0;
  double mass = 0.0;
  SolveStats stats;

  NoiseResult noise(double omega, std::optional<double> temperature = std::nullopt) const;
};

AxisLoss axis_loss(const FieldProblem& problem, const Vec3& axis);
AxisLoss axis_loss(const Scene& scene, const Vec3& axis, const SolverOptions& options = {});

/// Sum of independent noise results at the same ω and axis (e.g. two fibers
/// solved separately). Terms for equal materials are merged.
NoiseResult combine(const std::vector<NoiseResult>& parts);

std::string axis_label(const Vec3& axis);

}  // namespace dielnoise
