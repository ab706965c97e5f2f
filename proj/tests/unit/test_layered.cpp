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


#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "dielnoise/constants.hpp"
#include "dielnoise/errors.hpp"
#include "dielnoise/inference.hpp"
#include "dielnoise/layered.hpp"
#include "dielnoise/material.hpp"

using namespace dielnoise;

namespace {

constexpr double kOmega = 2.0 * constants::pi * 1e6;

/// Characteristic-matrix reflection of a stack seen from vacuum.
Reflection characteristic_matrix(double u, double omega, const LayerStack& stack) {
  const double k0 = omega / constants::c;
  auto kz = [&](cplx eps) {
    cplx r = std::sqrt(eps - u * u);
    return r.imag() < 0.0 ? -r : r;
  };
  auto solve = [&](auto admittance) {
    std::array<cplx, 4> m{1.0, 0.0, 0.0, 1.0};
    for (const auto& l : stack.layers) {
      const cplx y = admittance(l.eps);
      const cplx delta = k0 * kz(l.eps) * l.thickness;
      const std::array<cplx, 4> c{std::cos(delta), cplx{0, -1} * std::sin(delta) / y,
                                  cplx{0, -1} * y * std::sin(delta), std::cos(delta)};
      m = {m[0] * c[0] + m[1] * c[2], m[0] * c[1] + m[1] * c[3], m[2] * c[0] + m[3] * c[2],
           m[2] * c[1] + m[3] * c[3]};
    }
    const cplx ys = admittance(stack.substrate);
    const cplx y0 = admittance(cplx{1.0, 0.0});
    const cplx b = m[0] + m[1] * ys;
    const cplx c = m[2] + m[3] * ys;
    return (y0 * b - c) / (y0 * b + c);
  };
  const cplx rs = solve([&](cplx eps) { return kz(eps); });
  const cplx rp = -solve([&](cplx eps) { return eps / kz(eps); });
  return {rs, rp};
}

LayerStack sio2_half_space() { return LayerStack::half_space(MaterialDatabase::bundled().get("SiO2")); }

}  // namespace

TEST_SUITE("layered") {
  TEST_CASE("Fresnel coefficients at normal and grazing incidence") {
    const Reflection n = fresnel(0.0, 1.0, 4.0);
    CHECK(std::abs(n.s - cplx{-1.0 / 3.0, 0}) < 1e-15);
    CHECK(std::abs(n.p - cplx{1.0 / 3.0, 0}) < 1e-15);
    const Reflection far = fresnel(1e6, 1.0, 4.0);
    CHECK(std::abs(far.p - cplx{0.6, 0}) < 1e-9);
    CHECK(std::abs(far.s) < 1e-9);
    const Reflection same = fresnel(0.7, cplx{2.0, 0.1}, cplx{2.0, 0.1});
    CHECK(std::abs(same.s) == 0.0);
    CHECK(std::abs(same.p) == 0.0);
    CHECK_THROWS_AS(fresnel(-0.1, 1.0, 2.0), DomainError);
  }

  TEST_CASE("stack reflection matches a characteristic-matrix oracle") {
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> re(1.0, 25.0), im(0.0, 0.5), th(0.005, 0.05);
    const double omega = 2.0 * constants::pi * 1e9;
    for (int trial = 0; trial < 50; ++trial) {
      LayerStack s;
      for (int l = 0; l < 3; ++l) s.layers.push_back({cplx{re(rng), im(rng)}, th(rng)});
      s.substrate = cplx{re(rng), im(rng)};
      for (double u : {0.0, 0.3, 0.95, 1.2, 3.0, 8.0}) {
        const Reflection a = stack_reflection(u, omega, s, StackPhase::FullWave);
        const Reflection b = characteristic_matrix(u, omega, s);
        CAPTURE(u);
        CHECK(std::abs(a.s - b.s) < 1e-10);
        CHECK(std::abs(a.p - b.p) < 1e-10);
      }
    }
  }

  TEST_CASE("a layer of the substrate material changes nothing") {
    const cplx eps{3.9, 3.9 * 1.3e-3};
    LayerStack a;
    a.substrate = eps;
    LayerStack b = a;
    b.layers.push_back({eps, 1e-4});
    for (double u : {0.5, 2.0, 1e4}) {
      CHECK(std::abs(stack_reflection(u, kOmega, a).p - stack_reflection(u, kOmega, b).p) < 1e-14);
    }
  }

  TEST_CASE("black-body spectrum reaches the classical limit") {
    const double t = 300.0;
    const double classical =
        constants::k_B * t * kOmega * kOmega / (3.0 * constants::pi * constants::eps0 * std::pow(constants::c, 3));
    CHECK(blackbody_psd(kOmega, t) / classical == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(blackbody_psd(-1.0, t), DomainError);
  }

  TEST_CASE("near-field ratio of perpendicular to parallel Green function") {
    const GreenFunctionValue g = green_functions(kOmega, 1e-6, sio2_half_space());
    CHECK(g.g_perp / g.g_parallel == doctest::Approx(2.0).epsilon(0.005));
  }

  TEST_CASE("half-space noise follows an inverse cube") {
    std::vector<PowerLawPoint> pts;
    for (double d = 100e-6; d <= 600e-6 + 1e-12; d += 50e-6) {
      pts.push_back({d, plane_noise_psd(kOmega, d, sio2_half_space(), 300.0, Orientation::Perpendicular), 0.0});
    }
    CHECK(fit_power_law(pts).alpha == doctest::Approx(3.0).epsilon(0.02 / 3.0));
  }

  TEST_CASE("quadrature is self-convergent") {
    LayerStack s;
    s.layers.push_back({complex_permittivity(MaterialDatabase::bundled().get("SiO2")), 250e-6});
    for (double z : {100e-6, 600e-6}) {
      QuadratureOptions a, b, c;
      a.points = 15;
      b.points = 61;
      c.tolerance = 1e-7;
      const GreenFunctionValue ga = green_functions(kOmega, z, s, a);
      const GreenFunctionValue gb = green_functions(kOmega, z, s, b);
      const GreenFunctionValue gc = green_functions(kOmega, z, s, c);
      CHECK(std::abs(ga.g_parallel / gb.g_parallel - 1.0) < 1e-6);
      CHECK(std::abs(ga.g_perp / gb.g_perp - 1.0) < 1e-6);
      CHECK(std::abs(gc.g_perp / gb.g_perp - 1.0) < 1e-6);
    }
  }

  TEST_CASE("retardation inside the layers is negligible at MHz") {
    LayerStack s;
    s.layers.push_back({complex_permittivity(MaterialDatabase::bundled().get("Ta2O5")), 1e-5});
    s.substrate = complex_permittivity(MaterialDatabase::bundled().get("SiO2"));
    QuadratureOptions fw;
    fw.phase = StackPhase::FullWave;
    const double a = plane_noise_psd(kOmega, 200e-6, s, 300.0, Orientation::Parallel);
    const double b = plane_noise_psd(kOmega, 200e-6, s, 300.0, Orientation::Parallel, fw);
    CHECK(b / a == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("thick slab approaches the half-space and thin slab vanishes") {
    const Material m = MaterialDatabase::bundled().get("SiO2");
    LayerStack thick, thin;
    thick.layers.push_back({complex_permittivity(m), 0.5});
    thin.layers.push_back({complex_permittivity(m), 1e-9});
    const double half = plane_noise_psd(kOmega, 100e-6, sio2_half_space(), 300.0, Orientation::Perpendicular);
    CHECK(plane_noise_psd(kOmega, 100e-6, thick, 300.0, Orientation::Perpendicular) / half ==
          doctest::Approx(1.0).epsilon(1e-6));
    CHECK(plane_noise_psd(kOmega, 100e-6, thin, 300.0, Orientation::Perpendicular) / half < 1e-4);
  }

  TEST_CASE("invalid arguments are domain errors") {
    CHECK_THROWS_AS(green_functions(kOmega, 0.0, sio2_half_space()), DomainError);
    CHECK_THROWS_AS(green_functions(-kOmega, 1e-4, sio2_half_space()), DomainError);
    LayerStack bad;
    bad.layers.push_back({cplx{2.0, 0.0}, -1e-6});
    CHECK_THROWS_AS(bad.validate(), DomainError);
    QuadratureOptions q;
    q.points = 17;
    CHECK_THROWS_AS(green_functions(kOmega, 1e-4, sio2_half_space(), q), DomainError);
  }
}
