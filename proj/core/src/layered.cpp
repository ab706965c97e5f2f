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


#include "dielnoise/layered.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>

#include "dielnoise/constants.hpp"
#include "dielnoise/errors.hpp"

namespace dielnoise {

namespace {

cplx kz(cplx eps, double u) {
  cplx r = std::sqrt(eps - u * u);
  if (r.imag() < 0.0 || (r.imag() == 0.0 && r.real() < 0.0)) r = -r;
  return r;
}

cplx compose(cplx r_top, cplx r_below, cplx phase) {
  return (r_top + r_below * phase) / (1.0 + r_top * r_below * phase);
}

template <int N>
double gk(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& o,
          double* err) {
  double e = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, N>::integrate(f, a, b, o.max_depth,
                                                                                o.tolerance, &e);
  *err += e;
  return v;
}

double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& o,
                 double* err) {
  switch (o.points) {
    case 15: return gk<15>(f, a, b, o, err);
    case 31: return gk<31>(f, a, b, o, err);
    case 41: return gk<41>(f, a, b, o, err);
    case 51: return gk<51>(f, a, b, o, err);
    case 61: return gk<61>(f, a, b, o, err);
    default: throw DomainError("unsupported Gauss-Kronrod rule size");
  }
}

}  // namespace

cplx complex_permittivity(const Material& m) { return {m.eps_r, m.eps_r * m.tan_delta}; }

LayerStack LayerStack::half_space(const Material& m) {
  LayerStack s;
  s.substrate = complex_permittivity(m);
  return s;
}

void LayerStack::validate() const {
  for (const auto& l : layers) {
    if (!(l.thickness > 0.0)) throw DomainError("layer thickness must be positive");
  }
}

double blackbody_psd(double omega, double temperature) {
  if (!(omega > 0.0) || !(temperature > 0.0)) throw DomainError("omega and temperature must be positive");
  using namespace constants;
  const double x = hbar * omega / (k_B * temperature);
  return hbar * omega * omega * omega / (3.0 * pi * eps0 * c * c * c * -std::expm1(-x));
}

Reflection fresnel(double u, cplx eps_i, cplx eps_j) {
  if (!(u >= 0.0)) throw DomainError("u must be non-negative");
  const cplx ki = kz(eps_i, u);
  const cplx kj = kz(eps_j, u);
  return {(ki - kj) / (ki + kj), (eps_j * ki - eps_i * kj) / (eps_j * ki + eps_i * kj)};
}

Reflection stack_reflection(double u, double omega, const LayerStack& stack, StackPhase phase) {
  if (!(u >= 0.0)) throw DomainError("u must be non-negative");
  stack.validate();
  const std::size_t n = stack.layers.size();
  auto eps_at = [&](std::size_t i) { return i == 0 ? cplx{1.0, 0.0} : (i <= n ? stack.layers[i - 1].eps : stack.substrate); };
  Reflection r = fresnel(u, eps_at(n), eps_at(n + 1));
  for (std::size_t j = n; j >= 1; --j) {
    const StackLayer& layer = stack.layers[j - 1];
    const double k0 = omega / constants::c;
    const cplx ph = phase == StackPhase::QuasiStatic
                        ? cplx{std::exp(-2.0 * layer.thickness * u * k0), 0.0}
                        : std::exp(cplx{0.0, 2.0} * layer.thickness * k0 * kz(layer.eps, u));
    const Reflection top = fresnel(u, eps_at(j - 1), eps_at(j));
    r = {compose(top.s, r.s, ph), compose(top.p, r.p, ph)};
  }
  return r;
}

GreenFunctionValue green_functions(double omega, double z, const LayerStack& stack,
                                   const QuadratureOptions& opts) {
  if (!(z > 0.0)) throw DomainError("height above the stack must be positive");
  if (!(omega > 0.0)) throw DomainError("omega must be positive");
  stack.validate();
  const double a = 2.0 * z * omega / constants::c;

  GreenFunctionValue g;
  g.z = z;
  g.omega = omega;

  // Propagating branch, u = sin θ.
  auto prop_par = [&](double th) {
    const double u = std::sin(th), v = std::cos(th);
    const Reflection r = stack_reflection(u, omega, stack, opts.phase);
    return 0.75 * std::real(u * std::exp(cplx{0.0, a * v}) * (r.s - v * v * r.p));
  };
  auto prop_perp = [&](double th) {
    const double u = std::sin(th), v = std::cos(th);
    const Reflection r = stack_reflection(u, omega, stack, opts.phase);
    return 1.5 * std::real(u * u * u * std::exp(cplx{0.0, a * v}) * r.p);
  };
  const double half_pi = 0.5 * constants::pi;
  g.g_parallel = integrate(prop_par, 0.0, half_pi, opts, &g.error_parallel);
  g.g_perp = integrate(prop_perp, 0.0, half_pi, opts, &g.error_perp);

  // Evanescent branch, u = cosh t.
  auto envelope = [&](double t) { return std::pow(std::cosh(t), 3) * std::exp(-a * std::sinh(t)); };
  const double t_peak = std::asinh(3.0 / a);
  const double peak = envelope(t_peak);
  double t_max = t_peak + 1.0;
  while (envelope(t_max) > opts.tail_cutoff * peak) t_max += 0.5;

  auto ev_par = [&](double t) {
    const double ch = std::cosh(t), sh = std::sinh(t);
    const Reflection r = stack_reflection(ch, omega, stack, opts.phase);
    return 0.75 * ch * std::exp(-a * sh) * std::imag(r.s + sh * sh * r.p);
  };
  auto ev_perp = [&](double t) {
    const double ch = std::cosh(t), sh = std::sinh(t);
    const Reflection r = stack_reflection(ch, omega, stack, opts.phase);
    return 1.5 * ch * ch * ch * std::exp(-a * sh) * std::imag(r.p);
  };
  const double breaks[3] = {0.0, t_peak, t_max};
  for (int s = 0; s < 2; ++s) {
    g.g_parallel += integrate(ev_par, breaks[s], breaks[s + 1], opts, &g.error_parallel);
    g.g_perp += integrate(ev_perp, breaks[s], breaks[s + 1], opts, &g.error_perp);
  }
  const double scale = std::max(std::abs(g.g_parallel), std::abs(g.g_perp));
  if (!std::isfinite(g.g_parallel) || !std::isfinite(g.g_perp) ||
      g.error_parallel > 1e-6 * std::max(scale, 1e-300) + 1e-300 ||
      g.error_perp > 1e-6 * std::max(scale, 1e-300) + 1e-300) {
    if (scale > 0.0) throw ConvergenceError("Green-function quadrature did not converge");
  }
  return g;
}

double plane_noise_psd(double omega, double z, const LayerStack& stack, double temperature,
                       Orientation orientation, const QuadratureOptions& opts) {
  const GreenFunctionValue g = green_functions(omega, z, stack, opts);
  const double gv = orientation == Orientation::Parallel ? g.g_parallel : g.g_perp;
  return 2.0 * blackbody_psd(omega, temperature) * gv;
}

}  // namespace dielnoise
