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


#include "dielnoise/noise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dielnoise/constants.hpp"
#include "dielnoise/errors.hpp"

namespace dielnoise {

using constants::eps0;
using constants::hbar;
using constants::k_B;

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw DomainError(std::string(what) + " must be positive");
}

}  // namespace

double power_loss(double loss_integral, const Material& material, double omega) {
  if (!(loss_integral >= 0.0)) throw DomainError("loss integral must be non-negative");
  require_positive(omega, "omega");
  return 0.5 * omega * eps0 * material.eps_r * material.tan_delta * loss_integral;
}

double power_loss(const std::vector<MaterialTerm>& terms, double omega) {
  double p = 0.0;
  for (const auto& t : terms) p += power_loss(t.loss_integral, t.material, omega);
  return p;
}

double damping_coefficient(double p_loss, double mass, double omega, double delta_zeta) {
  if (!(p_loss >= 0.0)) throw DomainError("power loss must be non-negative");
  require_positive(mass, "mass");
  require_positive(omega, "omega");
  require_positive(delta_zeta, "delta_zeta");
  return 2.0 * p_loss / (mass * omega * omega * delta_zeta * delta_zeta);
}

double spectral_density_from_damping(double re_gamma, double mass, double temperature, double q) {
  require_positive(mass, "mass");
  require_positive(temperature, "temperature");
  if (q == 0.0) throw DomainError("charge must be non-zero");
  return 4.0 * mass * k_B * temperature * re_gamma / (q * q);
}

NoiseResult spectral_density(const LossBreakdown& losses, double delta_zeta, double q, double omega,
                             std::optional<double> temperature) {
  require_positive(omega, "omega");
  require_positive(delta_zeta, "delta_zeta");
  if (q == 0.0) throw DomainError("charge must be non-zero");
  if (temperature) require_positive(*temperature, "temperature");
  NoiseResult r;
  r.omega = omega;
  r.delta_zeta = delta_zeta;
  r.q = q;
  for (std::size_t m = 0; m < losses.materials.size(); ++m) {
    MaterialTerm t;
    t.material = losses.materials[m];
    if (temperature) t.material.temperature = *temperature;
    t.loss_integral = losses.material_total(m);
    t.s_e = 4.0 * k_B * t.material.temperature / (delta_zeta * delta_zeta * q * q * omega) * eps0 *
            t.material.eps_r * t.material.tan_delta * t.loss_integral;
    r.s_e += t.s_e;
    r.per_material_terms.push_back(std::move(t));
  }
  for (std::size_t i = 0; i < losses.regions.size(); ++i) {
    r.loss_integral_per_region.push_back({losses.regions[i], losses.region_total(i)});
  }
  return r;
}

NoiseResult spectral_density(const PerturbationField& pf, double omega, std::optional<double> temperature) {
  NoiseResult r = spectral_density(loss_breakdown(pf), pf.delta_zeta, pf.q, omega, temperature);
  r.axis = pf.axis;
  r.axis_label = axis_label(pf.axis);
  return r;
}

double heating_rate(double s_e, double omega, double q, double mass) {
  if (!(s_e >= 0.0)) throw DomainError("spectral density must be non-negative");
  require_positive(omega, "omega");
  require_positive(mass, "mass");
  return q * q * s_e / (4.0 * mass * hbar * omega);
}

double lamb_dicke(double lambda, double mass, double omega, double phi) {
  require_positive(lambda, "wavelength");
  require_positive(mass, "mass");
  require_positive(omega, "omega");
  return 2.0 * constants::pi / lambda * std::sqrt(hbar / (2.0 * mass * omega)) * std::cos(phi);
}

double ModeSet::eta(int i) const { return lamb_dicke(lambda, mass, modes.at(i).omega, modes.at(i).phi); }

std::array<double, 3> ModeSet::etas() const { return {eta(0), eta(1), eta(2)}; }

void ModeSet::validate() const {
  require_positive(lambda, "wavelength");
  require_positive(mass, "mass");
  for (const auto& m : modes) require_positive(m.omega, "mode frequency");
}

double beta_weight(const std::array<double, 3>& nbar, const ModeSet& modes) {
  double b = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (!(nbar[i] >= 0.0)) throw DomainError("phonon numbers must be non-negative");
    const double e = modes.eta(i);
    b += nbar[i] * e * e;
  }
  return b;
}

double beta_rate(const std::array<double, 3>& nbar_dot, const ModeSet& modes) {
  double b = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double e = modes.eta(i);
    b += nbar_dot[i] * e * e;
  }
  return b;
}

double project_axial(double beta_dot, double eta_z) {
  if (!(eta_z > 0.0)) throw DomainError("axial Lamb-Dicke factor must be positive");
  return beta_dot / (eta_z * eta_z);
}

NoiseResult AxisLoss::noise(double omega, std::optional<double> temperature) const {
  NoiseResult r = spectral_density(losses, delta_zeta, q, omega, temperature);
  r.axis = axis;
  r.axis_label = axis_label(axis);
  if (mass > 0.0) r.heating_rate = heating_rate(r.s_e, omega, q, mass);
  return r;
}

AxisLoss axis_loss(const FieldProblem& problem, const Vec3& axis) {
  const PerturbationField pf = problem.perturbation(axis);
  AxisLoss a;
  a.axis = pf.axis;
  a.losses = loss_breakdown(pf);
  a.delta_zeta = pf.delta_zeta;
  a.q = pf.q;
  a.mass = problem.scene().charge.mass;
  a.stats = pf.stats;
  return a;
}

AxisLoss axis_loss(const Scene& scene, const Vec3& axis, const SolverOptions& options) {
  return axis_loss(FieldProblem(scene, options), axis);
}

NoiseResult combine(const std::vector<NoiseResult>& parts) {
  if (parts.empty()) throw DomainError("nothing to combine");
  NoiseResult r = parts.front();
  r.s_e = 0.0;
  r.per_material_terms.clear();
  r.loss_integral_per_region.clear();
  r.heating_rate.reset();
  for (const auto& p : parts) {
    if (p.omega != r.omega) throw DomainError("combined noise results must share omega");
    for (const auto& t : p.per_material_terms) {
      auto it = std::find_if(r.per_material_terms.begin(), r.per_material_terms.end(),
                             [&](const MaterialTerm& x) { return x.material == t.material; });
      if (it == r.per_material_terms.end()) {
        r.per_material_terms.push_back(t);
      } else {
        it->loss_integral += t.loss_integral;
        it->s_e += t.s_e;
      }
    }
    for (const auto& l : p.loss_integral_per_region) r.loss_integral_per_region.push_back(l);
    if (p.heating_rate) r.heating_rate = r.heating_rate.value_or(0.0) + *p.heating_rate;
  }
  for (const auto& t : r.per_material_terms) r.s_e += t.s_e;
  return r;
}

std::string axis_label(const Vec3& axis) {
  static const char* names[3] = {"x", "y", "z"};
  for (int a = 0; a < 3; ++a) {
    if (std::abs(std::abs(axis[a]) - 1.0) < 1e-12) return (axis[a] < 0 ? "-" : "") + std::string(names[a]);
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.6g,%.6g,%.6g)", axis.x, axis.y, axis.z);
  return buf;
}

}  // namespace dielnoise
