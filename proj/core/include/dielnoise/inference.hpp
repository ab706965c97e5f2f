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
#include <iosfwd>
#include <string>
#include <vector>

#include "dielnoise/noise.hpp"

namespace dielnoise {

enum class ScanKind { Frequency, Distance };

struct MeasurementRecord {
  double d = 0.0;              // ion-dielectric distance [m]
  double d_sigma = 0.0;        // [m]
  double omega_z = 0.0;        // [rad/s]
  double omega_sigma = 0.0;    // [rad/s]
  double value = 0.0;          // measured β̇ or ṅ
  double sigma = 0.0;          // standard deviation of value
  ScanKind kind = ScanKind::Distance;

  void validate() const;
};

/// Reads records from CSV with header
/// kind,d_um,d_sigma_um,f_z_MHz,f_sigma_MHz,value,sigma
/// where kind is "frequency" or "distance". Blank lines and lines starting
/// with '#' are skipped.
std::vector<MeasurementRecord> read_measurements(std::istream& in);
std::vector<MeasurementRecord> read_measurements(const std::string& path);

/// One row of a distance / axial-frequency table (CSV header
/// d_um,d_sigma_um,f_z_MHz,f_sigma_MHz).
struct DistanceFrequency {
  double d = 0.0, d_sigma = 0.0, omega_z = 0.0, omega_sigma = 0.0;
};
std::vector<DistanceFrequency> read_distance_table(std::istream& in);
std::vector<DistanceFrequency> read_distance_table(const std::string& path);

struct PowerLawFit {
  double A = 0.0, sigma_A = 0.0;
  double alpha = 0.0, sigma_alpha = 0.0;
  /// Covariance of (ln A, α).
  std::array<double, 4> covariance{};
  /// Residuals ln S − ln(A d^−α).
  std::vector<double> residuals;

  double operator()(double d) const;
};

struct PowerLawPoint {
  double d = 0.0;
  double s = 0.0;
  /// Optional standard deviation of s; 0 means unweighted.
  double sigma = 0.0;
};

/// Linear regression of ln S on ln d. Without σ values the parameter
/// covariance is scaled by the residual variance.
PowerLawFit fit_power_law(const std::vector<PowerLawPoint>& points);

/// χ²_ν = Σ((meas − pred)/σ)² / (N − n_params).
double reduced_chi_square(const std::vector<MeasurementRecord>& measured,
                          const std::vector<double>& predicted, int fitted_parameters = 0);

/// One data point of the loss-tangent fit. The model is
/// value = fixed + coefficient · tan δ_free.
struct LossTangentPoint {
  double value = 0.0;
  double sigma = 0.0;
  double fixed = 0.0;
  double coefficient = 0.0;
};

/// Builds the linear model for β̇ from per-axis noise results at the
/// measured mode frequencies. Contributions of `free_material` become the
/// coefficient (per unit tan δ); everything else is the fixed part.
LossTangentPoint loss_tangent_point(const std::array<NoiseResult, 3>& per_axis, const ModeSet& modes,
                                    const std::string& free_material, double value, double sigma);

struct LossTangentFit {
  double tan_delta = 0.0;
  double sigma = 0.0;
  double reduced_chi_square = 0.0;
  /// |Σ w b (y − a − b t)| / Σ w |b (y − a)|, the normal-equation residual.
  double normal_residual = 0.0;
};

LossTangentFit fit_loss_tangent(const std::vector<LossTangentPoint>& points);

}  // namespace dielnoise
