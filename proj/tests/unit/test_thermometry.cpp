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

#include <cmath>

#include "dielnoise/constants.hpp"
#include "dielnoise/errors.hpp"
#include "dielnoise/thermometry.hpp"

using namespace dielnoise;

namespace {

constexpr double kOmegaRabi = 2.0 * constants::pi * 100e3;

double brute_force(double t, const std::array<double, 3>& nbar, const std::array<double, 3>& eta) {
  constexpr int kMax = 400;
  auto weights = [](double nb) {
    std::vector<double> p(kMax + 1);
    p[0] = 1.0 / (nb + 1.0);
    for (int n = 1; n <= kMax; ++n) p[n] = p[n - 1] * nb / (nb + 1.0);
    return p;
  };
  const auto p0 = weights(nbar[0]), p1 = weights(nbar[1]), p2 = weights(nbar[2]);
  double s = 0.0;
  for (int a = 0; a <= kMax; ++a) {
    for (int b = 0; b <= kMax; ++b) {
      if (p0[a] * p1[b] < 1e-18) continue;
      for (int c = 0; c <= kMax; ++c) {
        const double rate = kOmegaRabi * (1 - eta[0] * eta[0] * a) * (1 - eta[1] * eta[1] * b) *
                            (1 - eta[2] * eta[2] * c);
        const double x = std::sin(0.5 * rate * t);
        s += p0[a] * p1[b] * p2[c] * x * x;
      }
    }
  }
  return s;
}

ModeSet modes() {
  ModeSet m;
  m.mass = constants::mass_ca40;
  const double wr = 2.0 * constants::pi * 3.3e6;
  m.modes = {Mode{wr, constants::pi / 2}, Mode{wr, constants::pi / 2}, Mode{2.0 * constants::pi * 1e6, 0.0}};
  return m;
}

}  // namespace

TEST_SUITE("thermometry") {
  TEST_CASE("thermal cutoff bounds the neglected weight") {
    CHECK(thermal_cutoff(3.0, 1e-6) == 48);
    CHECK(thermal_cutoff(0.0, 1e-6) == 0);
    for (double nb : {0.1, 2.0, 17.5}) {
      const int n = thermal_cutoff(nb, 1e-6);
      const double r = nb / (nb + 1.0);
      CHECK(std::pow(r, n + 1) <= 1e-6);
      CHECK(std::pow(r, n) > 1e-6);
    }
    CHECK_THROWS_AS(thermal_cutoff(-1.0, 1e-6), DomainError);
  }

  TEST_CASE("Rabi signal matches a brute-force Fock sum") {
    const std::array<double, 3> nbar{2.0, 4.0, 10.0};
    const std::array<double, 3> eta{0.03, 0.05, 0.1};
    for (double t : {0.0, 3e-6, 11e-6, 37e-6}) {
      CHECK(rabi_signal(t, nbar, eta, kOmegaRabi, 1e-9) == doctest::Approx(brute_force(t, nbar, eta)).epsilon(1e-7));
    }
  }

  TEST_CASE("a ground-state ion performs full Rabi flops") {
    const double t_pi = constants::pi / kOmegaRabi;
    CHECK(rabi_signal(t_pi, {0, 0, 0}, {0.1, 0.1, 0.1}, kOmegaRabi) == doctest::Approx(1.0));
    CHECK(rabi_signal(0.5 * t_pi, {5, 5, 5}, {0, 0, 0}, kOmegaRabi) == doctest::Approx(0.5));
    CHECK_THROWS_AS(rabi_signal(1e-6, {1e7, 1e7, 1e7}, {0.1, 0.1, 0.1}, kOmegaRabi, 1e-6, 1000), DomainError);
  }

  TEST_CASE("beta fit recovers noiseless parameters") {
    RabiDataset d;
    d.modes = modes();
    const double eta = d.modes.eta(2);
    const double nbar = 12.0;
    for (int k = 1; k <= 60; ++k) d.pulse_times.push_back(1e-6 * k);
    d.probabilities = rabi_curve(d.pulse_times, {0, 0, nbar}, {0, 0, eta}, kOmegaRabi, 1e-9);
    d.shots_per_point = 100;
    const BetaFit f = fit_beta(d);
    CHECK(f.beta == doctest::Approx(nbar * eta * eta).epsilon(1e-5));
    CHECK(f.omega == doctest::Approx(kOmegaRabi).epsilon(1e-6));
    CHECK(f.sigma_beta > 0.0);
  }

  TEST_CASE("constant or malformed data is rejected") {
    RabiDataset d;
    d.modes = modes();
    d.pulse_times = {1e-6, 2e-6, 3e-6};
    d.probabilities = {0.5, 0.5, 0.5};
    CHECK_THROWS_AS(fit_beta(d), DomainError);
    d.probabilities = {0.1, 1.2, 0.3};
    CHECK_THROWS_AS(d.validate(), DomainError);
    d.probabilities = {0.1, 0.2};
    CHECK_THROWS_AS(d.validate(), DomainError);
  }

  TEST_CASE("straight-line fit of beta against time") {
    std::vector<BetaPoint> pts;
    for (int i = 0; i < 5; ++i) pts.push_back({0.005 * i, 0.1 + 0.9 * 0.005 * i, 0.01});
    const LinearFit f = fit_beta_dot(pts);
    CHECK(f.slope == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(f.sigma_slope == doctest::Approx(0.01 / std::sqrt(2.5e-4)).epsilon(1e-9));
  }

  TEST_CASE("synthetic experiments are reproducible") {
    ClosedLoopConfig c = closed_loop_defaults();
    SynthOptions o = c.synth;
    o.seed = 99;
    const auto a = synth_experiment(c.rates, c.modes, c.schedule, o);
    const auto b = synth_experiment(c.rates, c.modes, c.schedule, o);
    REQUIRE(a.size() == c.schedule.wait_times.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].probabilities == b[i].probabilities);
    o.seed = 100;
    CHECK(synth_experiment(c.rates, c.modes, c.schedule, o)[0].probabilities != a[0].probabilities);
    CHECK(derive_seed(42, 0) != derive_seed(42, 1));
    CHECK(derive_seed(42, 7) == derive_seed(42, 7));
  }

  TEST_CASE("closed loop recovers the injected rate") {
    ClosedLoopConfig c = closed_loop_defaults();
    c.trials = 30;
    const ClosedLoopResult r = closed_loop(c);
    REQUIRE(r.trials.size() == 30);
    CHECK(r.coverage >= 0.8);
    CHECK(std::abs(r.mean - 100.0) < 3.0 * r.mean_sigma / std::sqrt(30.0));
    c.threads = 3;
    const ClosedLoopResult threaded = closed_loop(c);
    for (std::size_t i = 0; i < r.trials.size(); ++i) CHECK(threaded.trials[i].ndot == r.trials[i].ndot);
  }
}
