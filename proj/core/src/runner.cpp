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


#include "dielnoise/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <thread>

#include "dielnoise/constants.hpp"
#include "dielnoise/errors.hpp"
#include "dielnoise/inference.hpp"
#include "dielnoise/layered.hpp"
#include "dielnoise/noise.hpp"
#include "dielnoise/presets.hpp"
#include "dielnoise/units.hpp"
#include "dielnoise/version.hpp"

namespace dielnoise {

namespace {

using json = nlohmann::json;
constexpr double kTwoPiMHz = 2.0 * constants::pi * 1e6;
constexpr double kSolverTolerance = 1e-8;
constexpr double kQuadratureTolerance = QuadratureOptions{}.tolerance;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string hex(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : width_(header.size()) { add(header); }

  void add(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw std::logic_error("CSV row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + cells[i];
    text_ += '\n';
  }
  const std::string& str() const { return text_; }

 private:
  std::size_t width_;
  std::string text_;
};

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw ConfigError("cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const char* resolution_name(Resolution r) { return r == Resolution::Paper ? "paper" : "coarse"; }

struct Job {
  Scene scene;
  std::vector<Vec3> axes;
  std::string label;
};

struct ConvergenceNote {
  std::string label;
  std::string axis;
  double base = 0.0;
  double refined = 0.0;
  std::size_t base_cells = 0;
  std::size_t refined_cells = 0;
};

class Session {
 public:
  Session(const RunOptions& options, std::string id) : options_(options), id_(std::move(id)) {}

  Resolution resolution() const { return options_.resolution.value_or(Resolution::Coarse); }
  const RunOptions& options() const { return options_; }
  const std::string& id() const { return id_; }

  void log(const std::string& msg) const {
    if (options_.log) options_.log("[" + id_ + "] " + msg);
  }

  /// Solves every job, in parallel when allowed; results keep job order.
  std::vector<std::vector<AxisLoss>> solve(const std::vector<Job>& jobs) {
    std::vector<Job> all = jobs;
    const bool check = options_.convergence_check && resolution() == Resolution::Coarse && !convergence_ &&
                       !jobs.empty() && !jobs.front().axes.empty() && !jobs.front().scene.grid.faces;
    if (check) {
      Job refined{jobs.front().scene, {jobs.front().axes.front()}, jobs.front().label + " (refined x2)"};
      refined.scene.grid.rules.refinement *= 2.0;
      all.push_back(std::move(refined));
    }
    const unsigned threads = std::max(1u, std::min<unsigned>(options_.threads, static_cast<unsigned>(all.size())));
    log("solving " + std::to_string(all.size()) + " scene(s) on " + std::to_string(threads) + " thread(s)");

    std::vector<std::vector<AxisLoss>> out(all.size());
    std::vector<std::size_t> cells(all.size(), 0);
    std::vector<std::exception_ptr> errors(all.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
      for (std::size_t i = next++; i < all.size(); i = next++) {
        try {
          SolverOptions so;
          so.relative_tolerance = kSolverTolerance;
          const FieldProblem problem(all[i].scene, so);
          cells[i] = problem.grid().cell_count();
          for (const auto& a : all[i].axes) out[i].push_back(axis_loss(problem, a));
          std::lock_guard<std::mutex> lock(log_mutex);
          log("done " + all[i].label + " (" + std::to_string(cells[i]) + " cells)");
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (const auto& a : out[i]) {
        solves_ += a.stats.solves;
        seconds_ += a.stats.seconds;
        max_unknowns_ = std::max(max_unknowns_, a.stats.unknowns);
      }
    }
    if (check) {
      ConvergenceNote n;
      n.label = jobs.front().label;
      n.axis = axis_label(jobs.front().axes.front());
      n.base = out.front().front().losses.total();
      n.refined = out.back().front().losses.total();
      n.base_cells = cells.front();
      n.refined_cells = cells.back();
      convergence_ = n;
      out.pop_back();
    }
    return out;
  }

  void add_file(const std::string& name, const std::string& content) { files_.emplace_back(name, content); }
  json& summary() { return summary_; }
  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

  json solver_json() const {
    json j{{"solves", solves_}, {"max_unknowns", max_unknowns_}, {"solver_seconds", seconds_}};
    return j;
  }
  json convergence_json() const {
    if (!convergence_) return nullptr;
    const auto& c = *convergence_;
    return json{{"scene", c.label},
                {"axis", c.axis},
                {"loss_integral", c.base},
                {"loss_integral_refined", c.refined},
                {"relative_change", c.refined != 0.0 ? (c.refined - c.base) / c.refined : 0.0},
                {"cells", c.base_cells},
                {"cells_refined", c.refined_cells}};
  }

 private:
  RunOptions options_;
  std::string id_;
  std::vector<std::pair<std::string, std::string>> files_;
  json summary_ = json::object();
  std::optional<ConvergenceNote> convergence_;
  int solves_ = 0;
  double seconds_ = 0.0;
  std::size_t max_unknowns_ = 0;
};

// ---------------------------------------------------------------- fibers

struct FiberLosses {
  double d = 0.0;
  std::array<AxisLoss, 2> axial;
  std::array<AxisLoss, 2> radial;
};

std::vector<FiberLosses> fiber_losses(Session& s, const std::vector<double>& distances) {
  std::vector<Job> jobs;
  for (double d : distances) {
    const auto pair = presets::fiber_pair(d, s.resolution());
    for (int f = 0; f < 2; ++f) {
      jobs.push_back({pair[f], {Vec3{0, 0, 1}, Vec3{1, 0, 0}},
                      "fiber " + std::to_string(f == 0 ? 41 : 47) + " layers, d = " + num(d * 1e6) + " um"});
    }
  }
  const auto res = s.solve(jobs);
  std::vector<FiberLosses> out;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    FiberLosses fl;
    fl.d = distances[i];
    for (int f = 0; f < 2; ++f) {
      fl.axial[f] = res[2 * i + f][0];
      fl.radial[f] = res[2 * i + f][1];
    }
    out.push_back(std::move(fl));
  }
  return out;
}

NoiseResult axial_noise(const FiberLosses& f, double omega) {
  return combine({f.axial[0].noise(omega), f.axial[1].noise(omega)});
}
NoiseResult radial_noise(const FiberLosses& f, double omega) {
  return combine({f.radial[0].noise(omega), f.radial[1].noise(omega)});
}

struct FiberPrediction {
  double s_axial = 0, s_radial = 0, ndot_axial = 0, ndot_radial = 0, beta_dot = 0, ndot_projected = 0;
};

FiberPrediction predict(const FiberLosses& f, double omega_z) {
  const ModeSet modes = presets::experiment_modes(omega_z);
  const NoiseResult ax = axial_noise(f, omega_z);
  const NoiseResult rad = radial_noise(f, presets::kRadialFrequency);
  FiberPrediction p;
  p.s_axial = ax.s_e;
  p.s_radial = rad.s_e;
  p.ndot_axial = heating_rate(ax.s_e, omega_z, ax.q, modes.mass);
  p.ndot_radial = heating_rate(rad.s_e, presets::kRadialFrequency, rad.q, modes.mass);
  p.beta_dot = beta_rate({p.ndot_radial, p.ndot_radial, p.ndot_axial}, modes);
  p.ndot_projected = project_axial(p.beta_dot, modes.eta(2));
  return p;
}

/// Distances to solve: the requested ones plus, when a band is requested,
/// each shifted by ±55 µm. Returns an index keyed by distance in nm.
std::map<long long, std::size_t> solve_distances(Session& s, std::vector<double> ds,
                                                 std::vector<FiberLosses>& losses) {
  std::vector<double> all;
  auto push = [&](double d) {
    const long long key = std::llround(d * 1e9);
    for (double x : all) {
      if (std::llround(x * 1e9) == key) return;
    }
    all.push_back(d);
  };
  for (double d : ds) {
    push(d);
    if (s.options().distance_band) {
      push(d - presets::kDistanceBand);
      push(d + presets::kDistanceBand);
    }
  }
  losses = fiber_losses(s, all);
  std::map<long long, std::size_t> index;
  for (std::size_t i = 0; i < all.size(); ++i) index[std::llround(all[i] * 1e9)] = i;
  return index;
}

const FiberLosses& at(const std::vector<FiberLosses>& losses, const std::map<long long, std::size_t>& index,
                      double d) {
  return losses.at(index.at(std::llround(d * 1e9)));
}

std::vector<MeasurementRecord> load_measurements(const Session& s, ScanKind kind) {
  std::vector<MeasurementRecord> out;
  if (!s.options().measurements) return out;
  for (const auto& r : read_measurements(s.options().measurements->string())) {
    if (r.kind == kind) out.push_back(r);
  }
  return out;
}

// --------------------------------------------------------------- presets

void run_plane_validation(Session& s) {
  const std::vector<double> ds{100e-6, 150e-6, 200e-6, 250e-6, 300e-6, 400e-6, 500e-6, 600e-6};
  const double omega = kTwoPiMHz;
  const double temperature = MaterialDatabase::bundled().get("SiO2").temperature;
  std::vector<Job> jobs;
  for (double d : ds) {
    jobs.push_back({presets::plane_validation_scene(d, s.resolution()), {Vec3{0, 0, 1}, Vec3{1, 0, 0}},
                    "disk, d = " + num(d * 1e6) + " um"});
  }
  const auto res = s.solve(jobs);
  const LayerStack slab = presets::plane_validation_stack();
  const LayerStack half = LayerStack::half_space(MaterialDatabase::bundled().get("SiO2"));
  Csv csv({"d_um", "S_axial", "S_radial", "S_axial_analytic", "S_radial_analytic", "rel_dev_axial",
           "rel_dev_radial", "S_axial_halfspace", "S_radial_halfspace"});
  double worst = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double ax = res[i][0].noise(omega).s_e;
    const double rad = res[i][1].noise(omega).s_e;
    const double aax = plane_noise_psd(omega, ds[i], slab, temperature, Orientation::Perpendicular);
    const double arad = plane_noise_psd(omega, ds[i], slab, temperature, Orientation::Parallel);
    const double hax = plane_noise_psd(omega, ds[i], half, temperature, Orientation::Perpendicular);
    const double hrad = plane_noise_psd(omega, ds[i], half, temperature, Orientation::Parallel);
    const double da = ax / aax - 1.0, dr = rad / arad - 1.0;
    worst = std::max({worst, std::abs(da), std::abs(dr)});
    csv.add({num(ds[i] * 1e6), num(ax), num(rad), num(aax), num(arad), num(da), num(dr), num(hax), num(hrad)});
  }
  s.add_file("plane_validation.csv", csv.str());
  s.summary()["max_relative_deviation"] = worst;
}

json fit_json(const PowerLawFit& f) {
  return json{{"A", f.A}, {"sigma_A", f.sigma_A}, {"alpha", f.alpha}, {"sigma_alpha", f.sigma_alpha}};
}

void run_distance_interpolation(Session& s) {
  const auto ds = presets::sweep_distances();
  const double omega_z = kTwoPiMHz;
  const double omega_r = presets::kRadialFrequency;
  const auto losses = fiber_losses(s, ds);
  std::vector<PowerLawPoint> pa, pr;
  std::vector<double> sa, sr;
  for (const auto& f : losses) {
    sa.push_back(axial_noise(f, omega_z).s_e);
    sr.push_back(radial_noise(f, omega_r).s_e);
    pa.push_back({f.d, sa.back(), 0.0});
    pr.push_back({f.d, sr.back(), 0.0});
  }
  const PowerLawFit fa = fit_power_law(pa);
  const PowerLawFit fr = fit_power_law(pr);
  const double temperature = MaterialDatabase::bundled().get("SiO2").temperature;
  const LayerStack s41 = presets::fiber_stack(presets::FiberSpec{41});
  const LayerStack s47 = presets::fiber_stack(presets::FiberSpec{47});
  Csv csv({"d_um", "S_axial", "S_radial", "S_axial_fit", "S_radial_fit", "S_axial_plane", "S_radial_plane",
           "axial_over_radial"});
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double ipa = plane_noise_psd(omega_z, ds[i], s41, temperature, Orientation::Perpendicular) +
                       plane_noise_psd(omega_z, ds[i], s47, temperature, Orientation::Perpendicular);
    const double ipr = plane_noise_psd(omega_r, ds[i], s41, temperature, Orientation::Parallel) +
                       plane_noise_psd(omega_r, ds[i], s47, temperature, Orientation::Parallel);
    csv.add({num(ds[i] * 1e6), num(sa[i]), num(sr[i]), num(fa(ds[i])), num(fr(ds[i])), num(ipa), num(ipr),
             num(sa[i] / sr[i])});
  }
  s.add_file("distance_interpolation.csv", csv.str());
  json fits{{"axial", fit_json(fa)}, {"radial", fit_json(fr)}, {"omega_axial_rad_s", omega_z},
            {"omega_radial_rad_s", omega_r}, {"distance_unit", "m"}};
  s.add_file("power_law_fits.json", fits.dump(2) + "\n");
  s.summary()["alpha_axial"] = fa.alpha;
  s.summary()["alpha_radial"] = fr.alpha;
}

void run_fiber_distance(Session& s) {
  const auto table = presets::distance_table();
  const auto measured = load_measurements(s, ScanKind::Distance);
  std::vector<double> ds;
  for (const auto& r : table) ds.push_back(r.d);
  for (const auto& m : measured) ds.push_back(m.d);
  std::vector<FiberLosses> losses;
  const auto index = solve_distances(s, ds, losses);
  const bool band = s.options().distance_band;

  std::vector<std::string> header{"d_um",        "d_sigma_um",  "f_z_MHz",  "S_axial",       "S_radial",
                                  "ndot_axial",  "ndot_radial", "beta_dot", "ndot_projected"};
  if (band) {
    header.push_back("ndot_projected_near");
    header.push_back("ndot_projected_far");
  }
  Csv csv(header);
  for (const auto& r : table) {
    const FiberPrediction p = predict(at(losses, index, r.d), r.omega_z);
    std::vector<std::string> row{num(r.d * 1e6),     num(r.d_sigma * 1e6),  num(r.omega_z / kTwoPiMHz),
                                 num(p.s_axial),     num(p.s_radial),       num(p.ndot_axial),
                                 num(p.ndot_radial), num(p.beta_dot),       num(p.ndot_projected)};
    if (band) {
      row.push_back(num(predict(at(losses, index, r.d - presets::kDistanceBand), r.omega_z).ndot_projected));
      row.push_back(num(predict(at(losses, index, r.d + presets::kDistanceBand), r.omega_z).ndot_projected));
    }
    csv.add(row);
  }
  s.add_file("fiber_pair_distance.csv", csv.str());

  if (!measured.empty()) {
    std::vector<MeasurementRecord> kept;
    std::vector<double> predicted;
    for (const auto& m : measured) {
      if (std::abs(m.d - 250e-6) < 0.5e-6) continue;
      kept.push_back(m);
      predicted.push_back(predict(at(losses, index, m.d), m.omega_z).ndot_projected);
    }
    if (kept.size() > 0) s.summary()["reduced_chi_square_distance"] = reduced_chi_square(kept, predicted);
  }
}

void run_fiber_frequency(Session& s) {
  const auto measured = load_measurements(s, ScanKind::Frequency);
  std::vector<double> ds{450e-6, 600e-6};
  for (const auto& m : measured) ds.push_back(m.d);
  std::vector<FiberLosses> losses;
  const auto index = solve_distances(s, ds, losses);
  const bool band = s.options().distance_band;

  std::vector<std::string> header{"d_um", "f_z_MHz", "S_axial", "ndot_axial", "ndot_projected"};
  if (band) {
    header.push_back("ndot_projected_near");
    header.push_back("ndot_projected_far");
  }
  Csv csv(header);
  for (double d : {450e-6, 600e-6}) {
    for (int k = 5; k <= 16; ++k) {
      const double omega = 0.1 * k * kTwoPiMHz;
      const FiberPrediction p = predict(at(losses, index, d), omega);
      std::vector<std::string> row{num(d * 1e6), num(0.1 * k), num(p.s_axial), num(p.ndot_axial),
                                   num(p.ndot_projected)};
      if (band) {
        row.push_back(num(predict(at(losses, index, d - presets::kDistanceBand), omega).ndot_projected));
        row.push_back(num(predict(at(losses, index, d + presets::kDistanceBand), omega).ndot_projected));
      }
      csv.add(row);
    }
  }
  s.add_file("fiber_pair_frequency.csv", csv.str());
  const FiberPrediction lo = predict(at(losses, index, 450e-6), 0.5 * kTwoPiMHz);
  const FiberPrediction hi = predict(at(losses, index, 450e-6), 1.5 * kTwoPiMHz);
  s.summary()["ndot_ratio_0p5_to_1p5_MHz"] = lo.ndot_axial / hi.ndot_axial;

  if (!measured.empty()) {
    std::vector<double> predicted;
    for (const auto& m : measured) predicted.push_back(predict(at(losses, index, m.d), m.omega_z).ndot_projected);
    s.summary()["reduced_chi_square_frequency"] = reduced_chi_square(measured, predicted);
  }
}

void run_loss_tangent(Session& s) {
  const auto measured = load_measurements(s, ScanKind::Frequency);
  std::vector<double> ds{450e-6, 600e-6};
  for (const auto& m : measured) ds.push_back(m.d);
  Session& session = s;
  RunOptions no_band = session.options();
  std::vector<FiberLosses> losses;
  std::map<long long, std::size_t> index;
  {
    std::vector<double> unique;
    for (double d : ds) {
      if (std::none_of(unique.begin(), unique.end(), [&](double x) { return std::llround(x * 1e9) == std::llround(d * 1e9); })) {
        unique.push_back(d);
      }
    }
    losses = fiber_losses(s, unique);
    for (std::size_t i = 0; i < unique.size(); ++i) index[std::llround(unique[i] * 1e9)] = i;
  }

  auto basis = [&](double d, double omega_z, double value, double sigma) {
    const FiberLosses& f = at(losses, index, d);
    const ModeSet modes = presets::experiment_modes(omega_z);
    const NoiseResult rad = radial_noise(f, presets::kRadialFrequency);
    return loss_tangent_point({rad, rad, axial_noise(f, omega_z)}, modes, "Ta2O5", value, sigma);
  };

  struct Row {
    double d, f;
    LossTangentPoint p;
  };
  std::vector<Row> rows;
  const double literature = MaterialDatabase::bundled().get("Ta2O5").tan_delta;
  std::string source;
  if (!measured.empty()) {
    source = "measured";
    for (const auto& m : measured) {
      // Measured values are axial projections β̇/η_z²; the fit works on β̇.
      const double eta_z = presets::experiment_modes(m.omega_z).eta(2);
      rows.push_back({m.d, m.omega_z, basis(m.d, m.omega_z, m.value * eta_z * eta_z, m.sigma * eta_z * eta_z)});
    }
  } else {
    source = "synthetic";
    std::mt19937_64 rng(s.options().seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    const double rel = 0.1;
    for (double d : {450e-6, 600e-6}) {
      for (int k = 5; k <= 16; ++k) {
        const double omega = 0.1 * k * kTwoPiMHz;
        LossTangentPoint p = basis(d, omega, 0.0, 1.0);
        const double truth = p.fixed + p.coefficient * literature;
        p.sigma = rel * truth;
        p.value = truth + p.sigma * noise(rng);
        rows.push_back({d, omega, p});
      }
    }
  }
  std::vector<LossTangentPoint> points;
  for (const auto& r : rows) points.push_back(r.p);
  const LossTangentFit fit = fit_loss_tangent(points);

  Csv csv({"d_um", "f_z_MHz", "beta_dot", "sigma", "fixed", "coefficient", "model_literature", "model_fit"});
  for (const auto& r : rows) {
    csv.add({num(r.d * 1e6), num(r.f / kTwoPiMHz), num(r.p.value), num(r.p.sigma), num(r.p.fixed),
             num(r.p.coefficient), num(r.p.fixed + r.p.coefficient * literature),
             num(r.p.fixed + r.p.coefficient * fit.tan_delta)});
  }
  s.add_file("loss_tangent_points.csv", csv.str());
  json j{{"source", source},
         {"free_material", "Ta2O5"},
         {"tan_delta", fit.tan_delta},
         {"sigma", fit.sigma},
         {"reduced_chi_square", fit.reduced_chi_square},
         {"literature_tan_delta", literature}};
  if (source == "synthetic") j["relative_noise"] = 0.1;
  s.add_file("loss_tangent_fit.json", j.dump(2) + "\n");
  s.summary()["tan_delta_fit"] = fit.tan_delta;
  s.summary()["tan_delta_sigma"] = fit.sigma;
}

void run_nano_patch(Session& s) {
  const double omega = kTwoPiMHz;
  const auto res = s.solve({{presets::nano_patch_scene(s.resolution()),
                             {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}},
                             "nano patch"}});
  Csv csv({"axis", "f_MHz", "S_E", "ndot"});
  json rates = json::object();
  for (const auto& a : res[0]) {
    const NoiseResult n = a.noise(omega);
    csv.add({n.axis_label, num(1.0), num(n.s_e), num(*n.heating_rate)});
    rates[n.axis_label] = *n.heating_rate;
  }
  s.add_file("nano_patch.csv", csv.str());
  s.summary()["heating_rates"] = rates;
}

// ---------------------------------------------------------- scenario files

Vec3 parse_axis(const json& v) {
  if (v.is_string()) {
    const std::string t = v.get<std::string>();
    const bool neg = !t.empty() && t[0] == '-';
    const std::string n = neg ? t.substr(1) : t;
    Vec3 a;
    if (n == "x") a.x = 1;
    else if (n == "y") a.y = 1;
    else if (n == "z") a.z = 1;
    else throw ConfigError("unknown axis '" + t + "'");
    return neg ? -a : a;
  }
  if (v.is_array() && v.size() == 3) {
    const Vec3 a{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    if (!(a.norm() > 0.0)) throw ConfigError("axis must be non-zero");
    return a * (1.0 / a.norm());
  }
  throw ConfigError("axis must be \"x\", \"-z\", ... or a 3-vector");
}

Vec3 parse_position(const json& v) {
  if (!v.is_array() || v.size() != 3) throw ConfigError("position must be a list of three lengths");
  return {units::length(v[0].get<std::string>()), units::length(v[1].get<std::string>()),
          units::length(v[2].get<std::string>())};
}

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing '") + key + "'");
  return j.at(key);
}

struct Prepared {
  std::string id;
  std::function<void(Session&)> body;
};

Prepared prepare_scene_scenario(const json& doc, const RunOptions& options) {
  Scene scene = build_scene(require(doc, "scene").dump());
  if (options.resolution && !scene.grid.faces) scene.grid.rules = GridRules::preset(*options.resolution);
  std::optional<double> temperature;
  if (doc.contains("temperature")) temperature = units::temperature(doc["temperature"].get<std::string>());
  const json& sweep = require(doc, "sweep");
  if (!sweep.is_array() || sweep.empty()) throw ConfigError("sweep must be a non-empty list");

  struct Point {
    Vec3 position;
    Vec3 axis;
    double omega;
  };
  std::vector<Point> points;
  for (const auto& e : sweep) {
    Point p;
    p.position = e.contains("position") ? parse_position(e["position"]) : scene.charge.position;
    p.axis = e.contains("axis") ? parse_axis(e["axis"]) : scene.charge.displacement_axis;
    p.omega = 2.0 * constants::pi * units::frequency(require(e, "frequency").get<std::string>());
    if (!(p.omega > 0.0)) throw ConfigError("frequency must be positive");
    Scene probe = scene;
    probe.charge.position = p.position;
    try {
      probe.validate();
    } catch (const Error& err) {
      throw ConfigError(std::string("sweep point: ") + err.what());
    }
    points.push_back(p);
  }
  Prepared prep;
  prep.id = require(doc, "id").get<std::string>();
  prep.body = [scene, points, temperature](Session& s) {
    std::vector<Vec3> positions;
    std::vector<std::vector<Vec3>> axes;
    for (const auto& p : points) {
      auto it = std::find(positions.begin(), positions.end(), p.position);
      if (it == positions.end()) {
        positions.push_back(p.position);
        axes.emplace_back();
        it = positions.end() - 1;
      }
      auto& list = axes[it - positions.begin()];
      if (std::find(list.begin(), list.end(), p.axis) == list.end()) list.push_back(p.axis);
    }
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < positions.size(); ++i) {
      Scene sc = scene;
      sc.charge.position = positions[i];
      jobs.push_back({sc, axes[i], "position " + std::to_string(i)});
    }
    const auto res = s.solve(jobs);
    Csv noise({"index", "x_um", "y_um", "z_um", "axis", "f_MHz", "S_E", "ndot"});
    Csv mats({"index", "material", "loss_integral", "S_E"});
    Csv regions({"index", "region", "loss_integral"});
    for (std::size_t k = 0; k < points.size(); ++k) {
      const auto& p = points[k];
      const std::size_t i = std::find(positions.begin(), positions.end(), p.position) - positions.begin();
      const std::size_t a = std::find(axes[i].begin(), axes[i].end(), p.axis) - axes[i].begin();
      const NoiseResult n = res[i][a].noise(p.omega, temperature);
      const std::string idx = std::to_string(k);
      noise.add({idx, num(p.position.x * 1e6), num(p.position.y * 1e6), num(p.position.z * 1e6), n.axis_label,
                 num(p.omega / kTwoPiMHz), num(n.s_e), num(n.heating_rate.value_or(0.0))});
      for (const auto& t : n.per_material_terms) mats.add({idx, t.material.name, num(t.loss_integral), num(t.s_e)});
      for (const auto& r : n.loss_integral_per_region) regions.add({idx, r.region, num(r.loss_integral)});
    }
    s.add_file("noise.csv", noise.str());
    s.add_file("materials.csv", mats.str());
    s.add_file("regions.csv", regions.str());
  };
  return prep;
}

Prepared prepare_analytic_scenario(const json& doc) {
  const MaterialDatabase& db = MaterialDatabase::bundled();
  const json& st = require(doc, "stack");
  LayerStack stack;
  auto eps_of = [&](const std::string& name) {
    return name == "vacuum" ? cplx{1.0, 0.0} : complex_permittivity(db.get(name));
  };
  if (st.contains("layers")) {
    for (const auto& l : st["layers"]) {
      stack.layers.push_back(
          {eps_of(require(l, "material").get<std::string>()), units::length(require(l, "thickness").get<std::string>())});
    }
  }
  stack.substrate = eps_of(require(st, "substrate").get<std::string>());
  stack.validate();
  const double temperature =
      doc.contains("temperature") ? units::temperature(doc["temperature"].get<std::string>()) : kDefaultTemperature;
  QuadratureOptions q;
  q.tolerance = kQuadratureTolerance;
  if (doc.contains("phase")) {
    const std::string ph = doc["phase"].get<std::string>();
    if (ph == "full-wave") q.phase = StackPhase::FullWave;
    else if (ph != "quasi-static") throw ConfigError("phase must be quasi-static or full-wave");
  }
  const json& sweep = require(doc, "sweep");
  if (!sweep.is_array() || sweep.empty()) throw ConfigError("sweep must be a non-empty list");
  std::vector<std::pair<double, double>> points;
  for (const auto& e : sweep) {
    const double z = units::length(require(e, "z").get<std::string>());
    const double f = units::frequency(require(e, "frequency").get<std::string>());
    if (!(z > 0.0) || !(f > 0.0)) throw ConfigError("z and frequency must be positive");
    points.emplace_back(z, 2.0 * constants::pi * f);
  }
  Prepared prep;
  prep.id = require(doc, "id").get<std::string>();
  prep.body = [stack, points, temperature, q](Session& s) {
    Csv csv({"z_um", "f_MHz", "g_parallel", "g_perp", "S_parallel", "S_perp"});
    for (const auto& [z, w] : points) {
      const GreenFunctionValue g = green_functions(w, z, stack, q);
      const double bb = 2.0 * blackbody_psd(w, temperature);
      csv.add({num(z * 1e6), num(w / kTwoPiMHz), num(g.g_parallel), num(g.g_perp), num(bb * g.g_parallel),
               num(bb * g.g_perp)});
    }
    s.add_file("analytic.csv", csv.str());
  };
  return prep;
}

std::string iso_time() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fiber-pair-frequency", "fiber-pair-distance",
                                              "infinite-plane-validation", "distance-interpolation",
                                              "loss-tangent-fit", "nano-patch"};
  return names;
}

bool is_preset(std::string_view name) {
  const auto& n = preset_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

std::filesystem::path default_output_dir() {
  const char* env = std::getenv(kOutputDirEnv);
  if (env && *env) return env;
  return "noise-output";
}

RunResult run(const std::string& target, const RunOptions& options) {
  Prepared prep;
  std::string config_text;
  std::string source;
  if (is_preset(target)) {
    prep.id = target;
    source = "preset";
    config_text = "preset:" + target;
    if (target == "infinite-plane-validation") prep.body = run_plane_validation;
    else if (target == "distance-interpolation") prep.body = run_distance_interpolation;
    else if (target == "fiber-pair-distance") prep.body = run_fiber_distance;
    else if (target == "fiber-pair-frequency") prep.body = run_fiber_frequency;
    else if (target == "loss-tangent-fit") prep.body = run_loss_tangent;
    else prep.body = run_nano_patch;
  } else {
    source = "file";
    config_text = read_file(target);
    json doc;
    try {
      doc = json::parse(config_text);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    try {
      const std::string kind = doc.value("kind", "scene");
      if (kind == "scene") prep = prepare_scene_scenario(doc, options);
      else if (kind == "analytic") prep = prepare_analytic_scenario(doc);
      else throw ConfigError("unknown scenario kind '" + kind + "'");
    } catch (const json::exception& e) {
      throw ConfigError(std::string("scenario schema violation: ") + e.what());
    }
    if (prep.id.empty() || prep.id.find_first_of("/\\") != std::string::npos || prep.id == "." || prep.id == "..") {
      throw ConfigError("scenario id must be a plain non-empty name");
    }
  }

  Session session(options, prep.id);
  RunResult result;
  result.id = prep.id;
  const auto start = std::chrono::steady_clock::now();
  try {
    prep.body(session);
  } catch (const std::exception& e) {
    result.ok = false;
    result.error = e.what();
    session.log(std::string("failed: ") + e.what());
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::string measurement_text;
  if (options.measurements) measurement_text = read_file(*options.measurements);
  const Resolution res = session.resolution();
  const std::string hash_input = config_text + "|resolution=" + resolution_name(res) +
                                 "|seed=" + std::to_string(options.seed) +
                                 "|band=" + (options.distance_band ? "1" : "0") + "|version=" + kVersion +
                                 "|measurements=" + measurement_text;

  const std::filesystem::path dir =
      (options.output_dir.empty() ? default_output_dir() : options.output_dir) / prep.id;
  std::filesystem::create_directories(dir);
  result.directory = dir;

  json files = json::array();
  for (const auto& [name, content] : session.files()) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + (dir / name).string() + "'");
    f << content;
    files.push_back({{"name", name}, {"fnv1a", hex(fnv1a(content))}});
    result.files.push_back(name);
  }
  json manifest{{"tool", "dielnoise"},
                {"version", kVersion},
                {"id", prep.id},
                {"source", source == "preset" ? target : std::filesystem::absolute(target).string()},
                {"kind", source},
                {"resolution", options.resolution || source == "preset" ? resolution_name(res) : "scenario"},
                {"threads", options.threads},
                {"seed", options.seed},
                {"distance_band", options.distance_band},
                {"config_hash", hex(fnv1a(hash_input))},
                {"tolerances",
                 {{"solver_relative_residual", kSolverTolerance},
                  {"quadrature", kQuadratureTolerance},
                  {"thermal_truncation", 1e-6}}},
                {"created", iso_time()},
                {"wall_seconds", wall},
                {"status", result.ok ? "ok" : "failed"},
                {"files", files},
                {"solver", session.solver_json()},
                {"summary", session.summary()}};
  if (!result.ok) manifest["error"] = result.error;
  if (options.measurements) manifest["measurements"] = options.measurements->string();
  const json conv = session.convergence_json();
  if (!conv.is_null()) manifest["grid_convergence"] = conv;
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << "\n";
  result.files.push_back("manifest.json");
  return result;
}

}  // namespace dielnoise
