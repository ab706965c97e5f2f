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


#include "dielnoise/thermometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>
#include <atomic>

#include "dielnoise/constants.hpp"

#include "dielnoise/errors.hpp"

namespace dielnoise {

namespace {

struct ModeWeights {
  std::vector<double> p;       // thermal weights
  std::vector<double> factor;  // 1 − η² n
};

ModeWeights mode_weights(double nbar, double eta, double tail) {
  ModeWeights m;
  if (nbar == 0.0 || eta == 0.0) {
    m.p = {1.0};
    m.factor = {1.0};
    return m;
  }
  const int n_max = thermal_cutoff(nbar, tail);
  if (eta * eta * n_max < 1e-16) {
    m.p = {1.0};
    m.factor = {1.0};
    return m;
  }
  const double r = nbar / (nbar + 1.0);
  double p = 1.0 / (nbar + 1.0);
  for (int n = 0; n <= n_max; ++n) {
    m.p.push_back(p);
    m.factor.push_back(1.0 - eta * eta * n);
    p *= r;
  }
  return m;
}

std::array<ModeWeights, 3> all_weights(const std::array<double, 3>& nbar, const std::array<double, 3>& eta,
                                       double tolerance, std::size_t max_terms) {
  for (int i = 0; i < 3; ++i) {
    if (!(nbar[i] >= 0.0)) throw DomainError("phonon numbers must be non-negative");
  }
  if (!(tolerance > 0.0)) throw DomainError("truncation tolerance must be positive");
  std::array<ModeWeights, 3> w;
  for (int i = 0; i < 3; ++i) w[i] = mode_weights(nbar[i], eta[i], tolerance / 3.0);
  const double terms = static_cast<double>(w[0].p.size()) * w[1].p.size() * w[2].p.size();
  if (terms > static_cast<double>(max_terms)) throw DomainError("thermal truncation budget exceeded");
  return w;
}

double signal(double t, double omega, const std::array<ModeWeights, 3>& w) {
  double s = 0.0;
  for (std::size_t a = 0; a < w[0].p.size(); ++a) {
    for (std::size_t b = 0; b < w[1].p.size(); ++b) {
      const double pab = w[0].p[a] * w[1].p[b];
      const double fab = w[0].factor[a] * w[1].factor[b];
      for (std::size_t c = 0; c < w[2].p.size(); ++c) {
        const double x = std::sin(0.5 * omega * fab * w[2].factor[c] * t);
        s += pab * w[2].p[c] * x * x;
      }
    }
  }
  return std::clamp(s, 0.0, 1.0);
}

struct SingleMode {
  double eta2;
  double tail;

  // Model value and its derivatives with respect to Ω and β.
  void eval(double t, double omega, double beta, double& p, double& d_omega, double& d_beta) const {
    const double nbar = std::max(beta, 0.0) / eta2;
    p = d_omega = d_beta = 0.0;
    const int n_max = nbar > 0.0 ? thermal_cutoff(nbar, tail) : 1;
    const double r = nbar / (nbar + 1.0);
    double pn = 1.0 / (nbar + 1.0);
    for (int n = 0; n <= n_max; ++n) {
      const double f = 1.0 - eta2 * n;
      const double x = 0.5 * omega * f * t;
      const double s = std::sin(x);
      double dp;
      if (nbar > 1e-12) {
        dp = pn * (n - nbar) / (nbar * (nbar + 1.0));
      } else {
        dp = n == 0 ? -1.0 : (n == 1 ? 1.0 : 0.0);
      }
      p += pn * s * s;
      d_omega += pn * std::sin(2.0 * x) * 0.5 * f * t;
      d_beta += dp * s * s / eta2;
      pn *= r;
    }
  }
};

struct Normal {
  double a11 = 0, a12 = 0, a22 = 0, g1 = 0, g2 = 0, chi2 = 0;
};

Normal normal_equations(const RabiDataset& d, const std::vector<double>& sigma, const SingleMode& m,
                        double omega, double beta) {
  Normal n;
  for (std::size_t k = 0; k < d.pulse_times.size(); ++k) {
    double p, jo, jb;
    m.eval(d.pulse_times[k], omega, beta, p, jo, jb);
    const double w = 1.0 / (sigma[k] * sigma[k]);
    const double r = d.probabilities[k] - p;
    n.chi2 += w * r * r;
    n.a11 += w * jo * jo;
    n.a12 += w * jo * jb;
    n.a22 += w * jb * jb;
    n.g1 += w * jo * r;
    n.g2 += w * jb * r;
  }
  return n;
}

double chi_square(const RabiDataset& d, const std::vector<double>& sigma, const SingleMode& m, double omega,
                  double beta) {
  double chi2 = 0.0;
  for (std::size_t k = 0; k < d.pulse_times.size(); ++k) {
    double p, jo, jb;
    m.eval(d.pulse_times[k], omega, beta, p, jo, jb);
    const double r = (d.probabilities[k] - p) / sigma[k];
    chi2 += r * r;
  }
  return chi2;
}

BetaFit levenberg_marquardt(const RabiDataset& d, const std::vector<double>& sigma, const SingleMode& m,
                            double omega, double beta, const BetaFitOptions& o) {
  double lambda = 1e-3;
  Normal n = normal_equations(d, sigma, m, omega, beta);
  int it = 0;
  bool converged = false;
  for (; it < o.max_iterations; ++it) {
    const double a11 = n.a11 * (1.0 + lambda), a22 = n.a22 * (1.0 + lambda);
    const double det = a11 * a22 - n.a12 * n.a12;
    if (!(det > 0.0)) throw ConvergenceError("singular normal equations in the Rabi fit");
    const double d_omega = (a22 * n.g1 - n.a12 * n.g2) / det;
    const double d_beta = (a11 * n.g2 - n.a12 * n.g1) / det;
    const double omega_new = omega + d_omega;
    const double beta_new = std::max(beta + d_beta, 0.0);
    const double chi2_new = chi_square(d, sigma, m, omega_new, beta_new);
    if (chi2_new <= n.chi2) {
      const double change = n.chi2 - chi2_new;
      const bool small_step = std::abs(omega_new - omega) <= o.tolerance * std::abs(omega) &&
                              std::abs(beta_new - beta) <= o.tolerance * std::max(beta, 1e-6);
      omega = omega_new;
      beta = beta_new;
      n = normal_equations(d, sigma, m, omega, beta);
      lambda = std::max(lambda / 10.0, 1e-12);
      if (small_step || change <= o.tolerance * std::max(n.chi2, 1e-300)) {
        converged = true;
        break;
      }
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) {
        converged = true;  // no further descent possible: at a minimum within precision
        break;
      }
    }
  }
  if (!converged) throw ConvergenceError("Rabi fit did not converge");
  BetaFit f;
  f.omega = omega;
  f.beta = beta;
  f.chi_square = n.chi2;
  f.iterations = it + 1;
  const double det = n.a11 * n.a22 - n.a12 * n.a12;
  if (det > 0.0) {
    f.sigma_omega = std::sqrt(n.a22 / det);
    f.sigma_beta = std::sqrt(n.a11 / det);
  }
  return f;
}

}  // namespace

void RabiDataset::validate() const {
  if (shots_per_point < 1) throw DomainError("shots per point must be at least 1");
  if (pulse_times.size() != probabilities.size()) throw DomainError("pulse times and probabilities differ in length");
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probabilities must lie in [0, 1]");
  }
  for (double t : pulse_times) {
    if (!(t >= 0.0)) throw DomainError("pulse times must be non-negative");
  }
}

int thermal_cutoff(double nbar, double tail) {
  if (!(nbar >= 0.0)) throw DomainError("phonon number must be non-negative");
  if (nbar == 0.0) return 0;
  const double r = nbar / (nbar + 1.0);
  const double n = std::ceil(std::log(tail) / std::log(r)) - 1.0;
  if (n > 1e8) throw DomainError("thermal truncation budget exceeded");
  return std::max(0, static_cast<int>(n));
}

double rabi_signal(double pulse_time, const std::array<double, 3>& nbar, const std::array<double, 3>& eta,
                   double omega_rabi, double tolerance, std::size_t max_terms) {
  return signal(pulse_time, omega_rabi, all_weights(nbar, eta, tolerance, max_terms));
}

std::vector<double> rabi_curve(const std::vector<double>& pulse_times, const std::array<double, 3>& nbar,
                               const std::array<double, 3>& eta, double omega_rabi, double tolerance,
                               std::size_t max_terms) {
  const auto w = all_weights(nbar, eta, tolerance, max_terms);
  std::vector<double> out;
  out.reserve(pulse_times.size());
  for (double t : pulse_times) out.push_back(signal(t, omega_rabi, w));
  return out;
}

BetaFit fit_beta(const RabiDataset& data, const BetaFitOptions& options) {
  data.validate();
  if (data.pulse_times.size() < 3) throw DomainError("Rabi fit needs at least three pulse times");
  const auto [lo, hi] = std::minmax_element(data.probabilities.begin(), data.probabilities.end());
  if (*hi - *lo < 1e-12) throw DomainError("degenerate Rabi data: constant signal");

  double eta = 0.0;
  if (options.eta_eff) {
    eta = *options.eta_eff;
  } else {
    for (int i = 0; i < 3; ++i) eta = std::max(eta, std::abs(data.modes.eta(i)));
  }
  if (!(eta > 0.0)) throw DomainError("effective Lamb-Dicke factor must be positive");
  const SingleMode model{eta * eta, 1e-6};

  const double n_shots = data.shots_per_point;
  const double floor = std::sqrt(0.25 / n_shots) / 10.0;
  auto weights_from = [&](const std::vector<double>& p) {
    std::vector<double> s(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) s[k] = std::max(std::sqrt(p[k] * (1.0 - p[k]) / n_shots), floor);
    return s;
  };
  std::vector<double> sigma = weights_from(data.probabilities);

  double omega0, beta0;
  const double t_max = *std::max_element(data.pulse_times.begin(), data.pulse_times.end());
  if (options.omega_guess) {
    omega0 = *options.omega_guess;
    beta0 = 0.05;
  } else {
    // Coarse scan: from one period over the record up to the sampling limit.
    std::vector<double> ts = data.pulse_times;
    std::sort(ts.begin(), ts.end());
    double dt_min = t_max;
    for (std::size_t k = 1; k < ts.size(); ++k) {
      if (ts[k] > ts[k - 1]) dt_min = std::min(dt_min, ts[k] - ts[k - 1]);
    }
    const double w_lo = 2.0 * std::numbers::pi / t_max;
    const double w_hi = std::numbers::pi / dt_min;
    // Periodogram of the mean-free signal locates the carrier frequency;
    // a local χ² scan then seeds the fit.
    double mean = 0.0;
    for (double p : data.probabilities) mean += p;
    mean /= static_cast<double>(data.probabilities.size());
    const double step = 0.25 * std::numbers::pi / t_max;
    double best_power = -1.0;
    omega0 = w_lo;
    for (double w = w_lo; w <= w_hi; w += step) {
      double c = 0.0, sn = 0.0;
      for (std::size_t k = 0; k < data.pulse_times.size(); ++k) {
        c += (data.probabilities[k] - mean) * std::cos(w * data.pulse_times[k]);
        sn += (data.probabilities[k] - mean) * std::sin(w * data.pulse_times[k]);
      }
      if (c * c + sn * sn > best_power) {
        best_power = c * c + sn * sn;
        omega0 = w;
      }
    }
    double best = std::numeric_limits<double>::infinity();
    const double center = omega0;
    beta0 = 0.0;
    for (int s = -16; s <= 16; ++s) {
      const double w = center + s * step / 8.0;
      for (double b : {0.0, 0.03, 0.1, 0.3}) {
        const double c = chi_square(data, sigma, model, w, b);
        if (c < best) {
          best = c;
          omega0 = w;
          beta0 = b;
        }
      }
    }
  }
  BetaFit f = levenberg_marquardt(data, sigma, model, omega0, beta0, options);
  std::vector<double> p_model(data.pulse_times.size());
  for (std::size_t k = 0; k < p_model.size(); ++k) {
    double jo, jb;
    model.eval(data.pulse_times[k], f.omega, f.beta, p_model[k], jo, jb);
  }
  sigma = weights_from(p_model);
  f = levenberg_marquardt(data, sigma, model, f.omega, f.beta, options);
  return f;
}

LinearFit fit_beta_dot(const std::vector<BetaPoint>& points) {
  if (points.size() < 3) throw DomainError("β̇ fit needs at least three wait times");
  double sw = 0, sx = 0, sy = 0;
  for (const auto& p : points) {
    if (!(p.sigma > 0.0)) throw DomainError("uncertainties must be positive");
    const double w = 1.0 / (p.sigma * p.sigma);
    sw += w;
    sx += w * p.t;
    sy += w * p.beta;
  }
  const double xm = sx / sw, ym = sy / sw;
  double sxx = 0, sxy = 0;
  for (const auto& p : points) {
    const double w = 1.0 / (p.sigma * p.sigma);
    sxx += w * (p.t - xm) * (p.t - xm);
    sxy += w * (p.t - xm) * (p.beta - ym);
  }
  if (!(sxx > 0.0)) throw DomainError("β̇ fit needs at least two distinct wait times");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = ym - f.slope * xm;
  f.sigma_slope = std::sqrt(1.0 / sxx);
  f.sigma_intercept = std::sqrt(1.0 / sw + xm * xm / sxx);
  return f;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finaliser over the combined value.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<RabiDataset> synth_experiment(const std::array<double, 3>& true_rates, const ModeSet& modes,
                                          const ExperimentSchedule& schedule, const SynthOptions& options) {
  modes.validate();
  if (options.shots < 1) throw DomainError("shots must be at least 1");
  if (schedule.wait_times.empty() || schedule.pulse_times.empty()) throw DomainError("empty schedule");
  for (int i = 0; i < 3; ++i) {
    if (!(true_rates[i] >= 0.0) || !(options.initial_nbar[i] >= 0.0)) {
      throw DomainError("rates and initial phonon numbers must be non-negative");
    }
  }
  const auto eta = modes.etas();
  std::mt19937_64 rng(options.seed);
  std::vector<RabiDataset> out;
  for (double t : schedule.wait_times) {
    if (!(t >= 0.0)) throw DomainError("wait times must be non-negative");
    std::array<double, 3> nbar;
    for (int i = 0; i < 3; ++i) nbar[i] = options.initial_nbar[i] + true_rates[i] * t;
    RabiDataset d;
    d.wait_time = t;
    d.pulse_times = schedule.pulse_times;
    d.shots_per_point = options.shots;
    d.modes = modes;
    for (double p : rabi_curve(schedule.pulse_times, nbar, eta, options.omega_rabi)) {
      std::binomial_distribution<int> draw(options.shots, p);
      d.probabilities.push_back(static_cast<double>(draw(rng)) / options.shots);
    }
    out.push_back(std::move(d));
  }
  return out;
}

ClosedLoopConfig closed_loop_defaults() {
  ClosedLoopConfig c;
  c.modes.mass = constants::mass_ca40;
  c.modes.lambda = 729e-9;
  const double two_pi = 2.0 * std::numbers::pi;
  c.modes.modes = {Mode{two_pi * 3.3e6, 0.5 * std::numbers::pi}, Mode{two_pi * 3.3e6, 0.5 * std::numbers::pi},
                   Mode{two_pi * 1e6, 0.0}};
  for (int i = 0; i < 5; ++i) c.schedule.wait_times.push_back(5e-3 * i);
  for (int k = 1; k <= 60; ++k) c.schedule.pulse_times.push_back(1e-6 * k);
  c.synth.seed = 42;
  return c;
}

ClosedLoopResult closed_loop(const ClosedLoopConfig& config) {
  if (config.trials < 1) throw DomainError("closed loop needs at least one trial");
  const double eta_z = config.modes.eta(2);
  ClosedLoopResult r;
  r.injected = config.rates[2];
  r.trials.resize(config.trials);
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(config.trials);
  auto worker = [&] {
    for (int i = next++; i < config.trials; i = next++) {
      try {
        SynthOptions o = config.synth;
        o.seed = derive_seed(config.synth.seed, static_cast<std::uint64_t>(i));
        std::vector<BetaPoint> points;
        for (const auto& d : synth_experiment(config.rates, config.modes, config.schedule, o)) {
          const BetaFit f = fit_beta(d);
          points.push_back({d.wait_time, f.beta, f.sigma_beta});
        }
        const LinearFit line = fit_beta_dot(points);
        ClosedLoopTrial& t = r.trials[i];
        t.ndot = project_axial(line.slope, eta_z);
        t.sigma = line.sigma_slope / (eta_z * eta_z);
        t.covered = std::abs(t.ndot - r.injected) <= 2.0 * t.sigma;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(config.trials)));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  int covered = 0;
  for (const auto& t : r.trials) {
    covered += t.covered ? 1 : 0;
    r.mean += t.ndot;
    r.mean_sigma += t.sigma;
  }
  r.coverage = static_cast<double>(covered) / config.trials;
  r.mean /= config.trials;
  r.mean_sigma /= config.trials;
  return r;
}

}  // namespace dielnoise
