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


#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "dielnoise/constants.hpp"
#include "dielnoise/errors.hpp"
#include "dielnoise/inference.hpp"
#include "dielnoise/layered.hpp"
#include "dielnoise/material.hpp"
#include "dielnoise/noise.hpp"
#include "dielnoise/runner.hpp"
#include "dielnoise/thermometry.hpp"
#include "dielnoise/units.hpp"
#include "dielnoise/version.hpp"

namespace {

using namespace dielnoise;
using json = nlohmann::json;
constexpr double kTwoPi = 2.0 * constants::pi;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

/// CSV with a header row; cells addressed by column name.
class Table {
 public:
  explicit Table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      std::vector<std::string> cells;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      if (header_.empty()) {
        header_ = cells;
        continue;
      }
      if (cells.size() != header_.size()) throw ConfigError(path + ": row width differs from header");
      rows_.push_back(cells);
    }
    if (header_.empty()) throw ConfigError(path + ": missing header");
  }

  bool has(const std::string& col) const { return index(col) >= 0; }
  std::size_t size() const { return rows_.size(); }

  double number(std::size_t row, const std::string& col) const {
    const int i = index(col);
    if (i < 0) throw ConfigError("missing column '" + col + "'");
    try {
      std::size_t used = 0;
      const double v = std::stod(rows_[row][i], &used);
      if (used != rows_[row][i].size()) throw std::invalid_argument("trailing text");
      return v;
    } catch (const std::logic_error&) {
      throw ConfigError("row " + std::to_string(row + 1) + ": '" + rows_[row][i] + "' is not a number");
    }
  }

 private:
  int index(const std::string& col) const {
    const auto it = std::find(header_.begin(), header_.end(), col);
    return it == header_.end() ? -1 : static_cast<int>(it - header_.begin());
  }
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

cplx eps_of(const std::string& name) {
  return name == "vacuum" ? cplx{1.0, 0.0} : complex_permittivity(MaterialDatabase::bundled().get(name));
}

Resolution parse_resolution(const std::string& s) { return s == "paper" ? Resolution::Paper : Resolution::Coarse; }

ModeSet modes_from(double f_z, double f_r, double phi_z, double phi_r) {
  ModeSet m;
  m.modes = {Mode{kTwoPi * f_r, phi_r}, Mode{kTwoPi * f_r, phi_r}, Mode{kTwoPi * f_z, phi_z}};
  m.mass = constants::mass_ca40;
  m.validate();
  return m;
}

struct ModeArgs {
  std::string f_z = "1MHz", f_r = "3.3MHz";
  double phi_z = 0.0, phi_r = constants::pi / 2;

  void attach(CLI::App* app) {
    app->add_option("--f-z", f_z, "axial mode frequency")->capture_default_str();
    app->add_option("--f-r", f_r, "radial mode frequency")->capture_default_str();
    app->add_option("--phi-z", phi_z, "angle of the axial mode to the beam [rad]")->capture_default_str();
    app->add_option("--phi-r", phi_r, "angle of the radial modes to the beam [rad]")->capture_default_str();
  }
  ModeSet modes() const { return modes_from(units::frequency(f_z), units::frequency(f_r), phi_z, phi_r); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dielectric electric-field noise and ion heating-rate toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a bundled preset or a scenario file");
  std::string target;
  std::string out_dir;
  RunOptions run_opts;
  std::string resolution;
  std::string measurements;
  bool no_band = false, no_check = false, quiet = false;
  run->add_option("target", target, "preset name or scenario JSON file")->required();
  run->add_option("-o,--output", out_dir, std::string("output directory (default $") + kOutputDirEnv + ")");
  run->add_option("--threads", run_opts.threads, "worker threads")->check(CLI::PositiveNumber);
  run->add_option("--resolution", resolution, "grid resolution")->check(CLI::IsMember({"coarse", "paper"}));
  run->add_option("--seed", run_opts.seed, "random seed for synthetic data");
  run->add_option("--measurements", measurements, "measured heating-rate CSV")->check(CLI::ExistingFile);
  run->add_flag("--no-band", no_band, "skip the d +- 55 um envelope");
  run->add_flag("--no-convergence-check", no_check, "skip the refined-grid check at coarse resolution");
  run->add_flag("-q,--quiet", quiet, "no progress messages");
  run->footer("Presets: fiber-pair-frequency, fiber-pair-distance, infinite-plane-validation, "
              "distance-interpolation, loss-tangent-fit, nano-patch");

  // analytic
  auto* analytic = app.add_subcommand("analytic", "Green functions and noise above a planar layer stack");
  std::vector<std::string> layers, zs, freqs{"1MHz"};
  std::string substrate = "vacuum", temperature = "300K";
  bool full_wave = false;
  analytic->add_option("--layer", layers, "layer MATERIAL:THICKNESS, vacuum side first (repeatable)");
  analytic->add_option("--substrate", substrate, "substrate material")->capture_default_str();
  analytic->add_option("--z", zs, "distance(s) above the top surface")->required();
  analytic->add_option("--frequency", freqs, "frequency or frequencies")->capture_default_str();
  analytic->add_option("--temperature", temperature)->capture_default_str();
  analytic->add_flag("--full-wave", full_wave, "include retardation inside the layers");

  // fit
  auto* fit = app.add_subcommand("fit", "Fits on tabulated data");
  fit->require_subcommand(1);
  auto* fit_pl = fit->add_subcommand("power-law", "Fit S = A d^-alpha to columns d_um,value[,sigma]");
  std::string pl_file;
  fit_pl->add_option("file", pl_file)->required()->check(CLI::ExistingFile);
  auto* fit_chi = fit->add_subcommand("chi2", "Reduced chi-square of predictions against measurements");
  std::string chi_meas, chi_pred;
  int chi_params = 0;
  fit_chi->add_option("--measurements", chi_meas)->required()->check(CLI::ExistingFile);
  fit_chi->add_option("--predictions", chi_pred, "CSV with a 'predicted' column in measurement order")
      ->required()
      ->check(CLI::ExistingFile);
  fit_chi->add_option("--parameters", chi_params, "number of fitted parameters");
  auto* fit_lt = fit->add_subcommand("loss-tangent",
                                     "Fit tan delta from columns value (or beta_dot),sigma,fixed,coefficient");
  std::string lt_file;
  fit_lt->add_option("file", lt_file)->required()->check(CLI::ExistingFile);

  // thermometry
  auto* thermo = app.add_subcommand("thermometry", "Rabi-flop thermometry");
  thermo->require_subcommand(1);
  auto* th_loop = thermo->add_subcommand("closed-loop", "Monte-Carlo synth/fit round trip");
  ClosedLoopConfig loop = closed_loop_defaults();
  th_loop->add_option("--trials", loop.trials)->capture_default_str()->check(CLI::PositiveNumber);
  th_loop->add_option("--rate", loop.rates[2], "injected axial heating rate [phonons/s]")->capture_default_str();
  th_loop->add_option("--seed", loop.synth.seed)->capture_default_str();
  th_loop->add_option("--threads", loop.threads)->check(CLI::PositiveNumber);
  auto* th_synth = thermo->add_subcommand("synth", "Write synthetic Rabi scans as CSV");
  std::array<double, 3> synth_rates{0.0, 0.0, 100.0};
  SynthOptions synth_opts;
  std::string synth_out;
  ModeArgs synth_modes;
  synth_modes.attach(th_synth);
  th_synth->add_option("--rate", synth_rates[2], "axial heating rate [phonons/s]")->capture_default_str();
  th_synth->add_option("--radial-rate", synth_rates[0], "radial heating rate [phonons/s]")->capture_default_str();
  th_synth->add_option("--seed", synth_opts.seed)->capture_default_str();
  th_synth->add_option("--shots", synth_opts.shots)->capture_default_str();
  th_synth->add_option("-o,--output", synth_out, "CSV path (stdout when omitted)");
  auto* th_fit = thermo->add_subcommand("fit", "Fit beta per wait time, beta-dot and the axial rate");
  std::string fit_file;
  ModeArgs fit_modes;
  fit_modes.attach(th_fit);
  th_fit->add_option("file", fit_file, "CSV wait_s,pulse_s,probability,shots")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  synth_rates[1] = synth_rates[0];

  try {
    if (*run) {
      if (!resolution.empty()) run_opts.resolution = parse_resolution(resolution);
      if (!out_dir.empty()) run_opts.output_dir = out_dir;
      if (!measurements.empty()) run_opts.measurements = measurements;
      run_opts.distance_band = !no_band;
      run_opts.convergence_check = !no_check;
      if (!quiet) run_opts.log = [](const std::string& m) { std::cerr << m << '\n'; };
      const RunResult r = dielnoise::run(target, run_opts);
      std::cout << r.directory.string() << '\n';
      if (!r.ok) {
        std::cerr << "error: " << r.error << '\n';
        return 3;
      }
      return 0;
    }

    if (*analytic) {
      LayerStack stack;
      for (const auto& l : layers) {
        const auto colon = l.find(':');
        if (colon == std::string::npos) throw ConfigError("--layer expects MATERIAL:THICKNESS");
        stack.layers.push_back({eps_of(l.substr(0, colon)), units::length(l.substr(colon + 1))});
      }
      stack.substrate = eps_of(substrate);
      stack.validate();
      const double t = units::temperature(temperature);
      QuadratureOptions q;
      if (full_wave) q.phase = StackPhase::FullWave;
      std::cout << "z_um,f_MHz,g_parallel,g_perp,S_parallel,S_perp\n";
      for (const auto& zt : zs) {
        for (const auto& ft : freqs) {
          const double z = units::length(zt);
          const double w = kTwoPi * units::frequency(ft);
          const GreenFunctionValue g = green_functions(w, z, stack, q);
          const double bb = 2.0 * blackbody_psd(w, t);
          std::cout << num(z * 1e6) << ',' << num(w / kTwoPi / 1e6) << ',' << num(g.g_parallel) << ','
                    << num(g.g_perp) << ',' << num(bb * g.g_parallel) << ',' << num(bb * g.g_perp) << '\n';
        }
      }
      return 0;
    }

    if (*fit_pl) {
      const Table t(pl_file);
      std::vector<PowerLawPoint> pts;
      for (std::size_t i = 0; i < t.size(); ++i) {
        pts.push_back({t.number(i, "d_um") * 1e-6, t.number(i, "value"), t.has("sigma") ? t.number(i, "sigma") : 0.0});
      }
      const PowerLawFit f = fit_power_law(pts);
      std::cout << json{{"A", f.A}, {"sigma_A", f.sigma_A}, {"alpha", f.alpha}, {"sigma_alpha", f.sigma_alpha},
                        {"distance_unit", "m"}}
                       .dump(2)
                << '\n';
      return 0;
    }

    if (*fit_chi) {
      const auto meas = read_measurements(chi_meas);
      const Table t(chi_pred);
      std::vector<double> pred;
      for (std::size_t i = 0; i < t.size(); ++i) pred.push_back(t.number(i, "predicted"));
      if (pred.size() != meas.size()) throw ConfigError("prediction and measurement counts differ");
      std::cout << json{{"reduced_chi_square", reduced_chi_square(meas, pred, chi_params)},
                        {"points", meas.size()}}
                       .dump(2)
                << '\n';
      return 0;
    }

    if (*fit_lt) {
      const Table t(lt_file);
      const std::string vcol = t.has("value") ? "value" : "beta_dot";
      std::vector<LossTangentPoint> pts;
      for (std::size_t i = 0; i < t.size(); ++i) {
        pts.push_back({t.number(i, vcol), t.number(i, "sigma"), t.number(i, "fixed"), t.number(i, "coefficient")});
      }
      const LossTangentFit f = fit_loss_tangent(pts);
      std::cout << json{{"tan_delta", f.tan_delta}, {"sigma", f.sigma},
                        {"reduced_chi_square", f.reduced_chi_square}}
                       .dump(2)
                << '\n';
      return 0;
    }

    if (*th_loop) {
      if (loop.threads == 0) loop.threads = 1;
      const ClosedLoopResult r = closed_loop(loop);
      const auto covered = std::count_if(r.trials.begin(), r.trials.end(), [](const auto& t) { return t.covered; });
      std::cout << json{{"injected", r.injected}, {"trials", r.trials.size()}, {"covered", covered},
                        {"coverage", r.coverage}, {"mean", r.mean}, {"mean_sigma", r.mean_sigma}}
                       .dump(2)
                << '\n';
      return 0;
    }

    if (*th_synth) {
      const ClosedLoopConfig d = closed_loop_defaults();
      const ModeSet modes = synth_modes.modes();
      const auto sets = synth_experiment(synth_rates, modes, d.schedule, synth_opts);
      std::ofstream file;
      if (!synth_out.empty()) {
        file.open(synth_out);
        if (!file) throw ConfigError("cannot write '" + synth_out + "'");
      }
      std::ostream& out = synth_out.empty() ? std::cout : file;
      out << "wait_s,pulse_s,probability,shots\n";
      for (const auto& s : sets) {
        for (std::size_t i = 0; i < s.pulse_times.size(); ++i) {
          out << num(s.wait_time) << ',' << num(s.pulse_times[i]) << ',' << num(s.probabilities[i]) << ','
              << s.shots_per_point << '\n';
        }
      }
      return 0;
    }

    if (*th_fit) {
      const Table t(fit_file);
      const ModeSet modes = fit_modes.modes();
      std::map<double, RabiDataset> by_wait;
      for (std::size_t i = 0; i < t.size(); ++i) {
        RabiDataset& d = by_wait[t.number(i, "wait_s")];
        d.wait_time = t.number(i, "wait_s");
        d.pulse_times.push_back(t.number(i, "pulse_s"));
        d.probabilities.push_back(t.number(i, "probability"));
        d.shots_per_point = static_cast<int>(t.number(i, "shots"));
        d.modes = modes;
      }
      json betas = json::array();
      std::vector<BetaPoint> pts;
      for (auto& [wait, d] : by_wait) {
        d.validate();
        const BetaFit b = fit_beta(d);
        pts.push_back({wait, b.beta, b.sigma_beta});
        betas.push_back({{"wait_s", wait}, {"beta", b.beta}, {"sigma_beta", b.sigma_beta},
                         {"omega_rabi", b.omega}, {"chi_square", b.chi_square}});
      }
      const LinearFit lf = fit_beta_dot(pts);
      const double eta_z = modes.eta(2);
      std::cout << json{{"betas", betas},
                        {"beta_dot", lf.slope},
                        {"sigma_beta_dot", lf.sigma_slope},
                        {"ndot_axial", project_axial(lf.slope, eta_z)},
                        {"sigma_ndot_axial", lf.sigma_slope / (eta_z * eta_z)}}
                       .dump(2)
                << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const UnknownMaterialError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const GeometryError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
