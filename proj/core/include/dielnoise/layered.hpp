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

#include <complex>
#include <vector>

#include "dielnoise/material.hpp"

namespace dielnoise {

using cplx = std::complex<double>;

/// ε = ε_r (1 + i tan δ).
cplx complex_permittivity(const Material& m);

struct StackLayer {
  cplx eps;
  double thickness = 0.0;
};

/// Planar stratified medium below a vacuum half-space. Layers are listed
/// from the vacuum side inward; the substrate is semi-infinite.
struct LayerStack {
  std::vector<StackLayer> layers;
  cplx substrate{1.0, 0.0};

  static LayerStack half_space(const Material& m);
  void validate() const;
};

/// Blackbody field spectrum ħω³ / (3π ε₀ c³ (1 − e^{−ħω/k_BT})).
double blackbody_psd(double omega, double temperature);

struct Reflection {
  cplx s;
  cplx p;
};

/// Single-interface coefficients between media i and j at in-plane wave
/// number u (in units of ω/c). Square roots are taken with Im ≥ 0.
Reflection fresnel(double u, cplx eps_i, cplx eps_j);

enum class StackPhase {
  /// e^{−2 t u ω/c}: the near-field form, independent of the layer medium.
  QuasiStatic,
  /// e^{2 i t (ω/c) √(ε − u²)}: exact propagation phase inside each layer.
  FullWave,
};

/// Total reflection coefficient of the stack seen from vacuum, composed
/// pairwise from the substrate outward.
Reflection stack_reflection(double u, double omega, const LayerStack& stack,
                            StackPhase phase = StackPhase::QuasiStatic);

struct GreenFunctionValue {
  double g_parallel = 0.0;
  double g_perp = 0.0;
  double z = 0.0;
  double omega = 0.0;
  /// Quadrature error estimates reported by the integrator.
  double error_parallel = 0.0;
  double error_perp = 0.0;
};

struct QuadratureOptions {
  /// Gauss-Kronrod rule size: 15, 31, 41, 51 or 61.
  int points = 31;
  /// Relative error target passed to the adaptive Gauss-Kronrod driver.
  double tolerance = 1e-9;
  unsigned max_depth = 20;
  /// Integrand envelope cut-off relative to its peak on the evanescent branch.
  double tail_cutoff = 1e-14;
  StackPhase phase = StackPhase::QuasiStatic;
};

/// Normalised reflected-field Green functions at height z above the stack.
GreenFunctionValue green_functions(double omega, double z, const LayerStack& stack,
                                   const QuadratureOptions& opts = {});

enum class Orientation { Parallel, Perpendicular };

/// Field-noise spectrum at height z. Returned in the one-sided convention
/// used by the heating-rate formula, i.e. 2 S_BB g.
double plane_noise_psd(double omega, double z, const LayerStack& stack, double temperature,
                       Orientation orientation, const QuadratureOptions& opts = {});

}  // namespace dielnoise
