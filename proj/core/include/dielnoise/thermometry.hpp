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
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "dielnoise/noise.hpp"

namespace dielnoise {

/// Carrier Rabi data taken after one wait time.
struct RabiDataset {
  double wait_time = 0.0;
  std::vector<double> pulse_times;
  std::vector<double> probabilities;
  int shots_per_point = 1;
  ModeSet modes;

  void validate() const;
};

/// Smallest n_max with thermal tail weight (n̄/(n̄+1))^{n_max+1} ≤ tail.
int thermal_cutoff(double nbar, double tail);

/// Excitation probability of the carrier after `pulse_time` for thermal
/// occupations `nbar` along x, y, z with Lamb-Dicke factors `eta`. The
/// neglected thermal weight is at most `tolerance`; a DomainError is thrown
/// when that would need more than `max_terms` Fock states.
double rabi_signal(double pulse_time, const std::array<double, 3>& nbar, const std::array<double, 3>& eta,
                   double omega_rabi, double tolerance = 1e-6, std::size_t max_terms = 50'000'000);

/// Same model evaluated at many pulse times.
std::vector<double> rabi_curve(const std::vector<double>& pulse_times, const std::array<double, 3>& nbar,
                               const std::array<double, 3>& eta, double omega_rabi, double tolerance = 1e-6,
                               std::size_t max_terms = 50'000'000);

struct BetaFitOptions {
  /// Lamb-Dicke factor of the effective single mode; the largest η of the
  /// dataset's modes when unset.
  std::optional<double> eta_eff;
  std::optional<double> omega_guess;
  int max_iterations = 200;
  double tolerance = 1e-10;
};

struct BetaFit {
  double beta = 0.0, sigma_beta = 0.0;
  double omega = 0.0, sigma_omega = 0.0;
  double chi_square = 0.0;
  int iterations = 0;
};

/// Weighted least-squares fit of (Ω, β) with an effective single mode
/// n̄_eff = β/η_eff². Weights come from quantum projection noise,
/// σ² = p(1 − p)/N, floored at σ = sqrt(0.25/N)/10; a second pass
/// recomputes them from the fitted model.
BetaFit fit_beta(const RabiDataset& data, const BetaFitOptions& options = {});

struct BetaPoint {
  double t = 0.0;
  double beta = 0.0;
  double sigma = 0.0;
};

struct LinearFit {
  double slope = 0.0, sigma_slope = 0.0;
  double intercept = 0.0, sigma_intercept = 0.0;
};

/// Weighted straight-line fit of β against wait time; the slope is β̇.
LinearFit fit_beta_dot(const std::vector<BetaPoint>& points);

struct ExperimentSchedule {
  std::vector<double> wait_times;
  std::vector<double> pulse_times;
};

struct SynthOptions {
  /// n̄ after Doppler cooling along x, y, z.
  std::array<double, 3> initial_nbar{3.0, 3.0, 10.0};
  double omega_rabi = 2.0 * std::numbers::pi * 100e3;
  int shots = 100;
  std::uint64_t seed = 1;
};

/// Binomially sampled Rabi scans with n̄_i(t) = n̄_i(0) + ṅ_i t.
std::vector<RabiDataset> synth_experiment(const std::array<double, 3>& true_rates, const ModeSet& modes,
                                          const ExperimentSchedule& schedule, const SynthOptions& options);

/// Independent, reproducible seed for trial `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Monte-Carlo check of the whole thermometry chain: synthesise scans,
/// fit β per wait time, fit β̇, project onto the axial mode.
struct ClosedLoopConfig {
  std::array<double, 3> rates{0.0, 0.0, 100.0};
  ModeSet modes;
  ExperimentSchedule schedule;
  SynthOptions synth;
  int trials = 200;
  unsigned threads = 1;
};

/// Axial mode at 2π·1 MHz along the beam, radial modes at 2π·3.3 MHz
/// orthogonal to it; five wait times up to 20 ms and 60 pulse lengths up to 60 µs.
ClosedLoopConfig closed_loop_defaults();

struct ClosedLoopTrial {
  double ndot = 0.0;
  double sigma = 0.0;
  bool covered = false;  // |ndot − injected| ≤ 2σ
};

struct ClosedLoopResult {
  std::vector<ClosedLoopTrial> trials;
  double injected = 0.0;
  double coverage = 0.0;
  double mean = 0.0;
  double mean_sigma = 0.0;
};

ClosedLoopResult closed_loop(const ClosedLoopConfig& config);

}  // namespace dielnoise
