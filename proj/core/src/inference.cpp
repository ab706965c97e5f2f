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


#include "dielnoise/inference.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "dielnoise/constants.hpp"
#include "dielnoise/errors.hpp"

namespace dielnoise {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

double number(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) + ": '" + s + "' is not a number");
  }
}

template <class Row>
std::vector<Row> read_rows(std::istream& in, const std::vector<std::string>& header,
                           Row (*parse)(const std::vector<std::string>&, int)) {
  std::vector<Row> rows;
  std::string line;
  int n = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') {
      continue;
    }
    const auto cells = split(line);
    if (!have_header) {
      if (cells != header) throw ConfigError("line " + std::to_string(n) + ": unexpected CSV header");
      have_header = true;
      continue;
    }
    if (cells.size() != header.size()) {
      throw ConfigError("line " + std::to_string(n) + ": expected " + std::to_string(header.size()) + " columns");
    }
    rows.push_back(parse(cells, n));
  }
  if (!have_header) throw ConfigError("CSV header missing");
  return rows;
}

std::ifstream open(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open '" + path + "'");
  return f;
}

constexpr double kTwoPiMHz = 2.0 * constants::pi * 1e6;

MeasurementRecord parse_record(const std::vector<std::string>& c, int line) {
  MeasurementRecord r;
  if (c[0] == "frequency") r.kind = ScanKind::Frequency;
  else if (c[0] == "distance") r.kind = ScanKind::Distance;
  else throw ConfigError("line " + std::to_string(line) + ": unknown scan kind '" + c[0] + "'");
  r.d = number(c[1], line) * 1e-6;
  r.d_sigma = number(c[2], line) * 1e-6;
  r.omega_z = number(c[3], line) * kTwoPiMHz;
  r.omega_sigma = number(c[4], line) * kTwoPiMHz;
  r.value = number(c[5], line);
  r.sigma = number(c[6], line);
  try {
    r.validate();
  } catch (const DomainError& e) {
    throw ConfigError("line " + std::to_string(line) + ": " + e.what());
  }
  return r;
}

DistanceFrequency parse_distance(const std::vector<std::string>& c, int line) {
  DistanceFrequency r{number(c[0], line) * 1e-6, number(c[1], line) * 1e-6, number(c[2], line) * kTwoPiMHz,
                      number(c[3], line) * kTwoPiMHz};
  if (!(r.d > 0) || !(r.d_sigma > 0) || !(r.omega_z > 0) || !(r.omega_sigma > 0)) {
    throw ConfigError("line " + std::to_string(line) + ": values and uncertainties must be positive");
  }
  return r;
}

}  // namespace

void MeasurementRecord::validate() const {
  if (!(d > 0.0) || !(omega_z > 0.0)) throw DomainError("distance and frequency must be positive");
  if (!(d_sigma > 0.0) || !(omega_sigma > 0.0) || !(sigma > 0.0)) {
    throw DomainError("uncertainties must be positive");
  }
}

std::vector<MeasurementRecord> read_measurements(std::istream& in) {
  return read_rows<MeasurementRecord>(in, {"kind", "d_um", "d_sigma_um", "f_z_MHz", "f_sigma_MHz", "value", "sigma"},
                                      parse_record);
}

std::vector<MeasurementRecord> read_measurements(const std::string& path) {
  auto f = open(path);
  return read_measurements(f);
}

std::vector<DistanceFrequency> read_distance_table(std::istream& in) {
  return read_rows<DistanceFrequency>(in, {"d_um", "d_sigma_um", "f_z_MHz", "f_sigma_MHz"}, parse_distance);
}

std::vector<DistanceFrequency> read_distance_table(const std::string& path) {
  auto f = open(path);
  return read_distance_table(f);
}

double PowerLawFit::operator()(double d) const { return A * std::pow(d, -alpha); }

PowerLawFit fit_power_law(const std::vector<PowerLawPoint>& points) {
  const std::size_t n = points.size();
  if (n < 3) throw DomainError("power-law fit needs at least 3 points");
  bool weighted = false;
  for (const auto& p : points) {
    if (!(p.d > 0.0) || !(p.s > 0.0)) throw DomainError("power-law fit needs positive d and S");
    if (p.sigma < 0.0) throw DomainError("uncertainties must be non-negative");
    weighted = weighted || p.sigma > 0.0;
  }
  if (weighted) {
    for (const auto& p : points) {
      if (!(p.sigma > 0.0)) throw DomainError("either all points or none carry an uncertainty");
    }
  }
  std::vector<double> x(n), y(n), w(n, 1.0);
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log(points[i].d);
    y[i] = std::log(points[i].s);
    if (weighted) w[i] = std::pow(points[i].s / points[i].sigma, 2);
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double xm = sx / sw, ym = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += w[i] * (x[i] - xm) * (x[i] - xm);
    sxy += w[i] * (x[i] - xm) * (y[i] - ym);
  }
  if (!(sxx > 0.0)) throw DomainError("power-law fit needs at least two distinct distances");
  const double slope = sxy / sxx;
  const double intercept = ym - slope * xm;

  PowerLawFit f;
  f.alpha = -slope;
  f.A = std::exp(intercept);
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    f.residuals.push_back(r);
    rss += w[i] * r * r;
  }
  const double scale = weighted ? 1.0 : rss / static_cast<double>(n - 2);
  const double var_slope = scale / sxx;
  const double var_intercept = scale * (1.0 / sw + xm * xm / sxx);
  const double cov = -scale * xm / sxx;
  f.covariance = {var_intercept, -cov, -cov, var_slope};
  f.sigma_alpha = std::sqrt(var_slope);
  f.sigma_A = f.A * std::sqrt(var_intercept);
  return f;
}

double reduced_chi_square(const std::vector<MeasurementRecord>& measured, const std::vector<double>& predicted,
                          int fitted_parameters) {
  if (measured.size() != predicted.size()) throw DomainError("measured and predicted sizes differ");
  const long dof = static_cast<long>(measured.size()) - fitted_parameters;
  if (dof <= 0) throw DomainError("no degrees of freedom left");
  double chi2 = 0.0;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    if (!(measured[i].sigma > 0.0)) throw DomainError("uncertainties must be positive");
    const double r = (measured[i].value - predicted[i]) / measured[i].sigma;
    chi2 += r * r;
  }
  return chi2 / static_cast<double>(dof);
}

LossTangentPoint loss_tangent_point(const std::array<NoiseResult, 3>& per_axis, const ModeSet& modes,
                                    const std::string& free_material, double value, double sigma) {
  LossTangentPoint p;
  p.value = value;
  p.sigma = sigma;
  bool found = false;
  for (int i = 0; i < 3; ++i) {
    const NoiseResult& r = per_axis[i];
    const double eta = modes.eta(i);
    const double to_rate = eta * eta * heating_rate(1.0, r.omega, r.q, modes.mass);
    for (const auto& t : r.per_material_terms) {
      if (t.material.name == free_material) {
        found = true;
        if (t.material.tan_delta > 0.0) p.coefficient += to_rate * t.s_e / t.material.tan_delta;
        else if (t.s_e != 0.0) throw DomainError("inconsistent material term");
      } else {
        p.fixed += to_rate * t.s_e;
      }
    }
  }
  if (!found) throw DomainError("material '" + free_material + "' does not contribute to the noise");
  return p;
}

LossTangentFit fit_loss_tangent(const std::vector<LossTangentPoint>& points) {
  if (points.empty()) throw DomainError("loss-tangent fit needs data");
  double sbb = 0.0, sby = 0.0, max_b = 0.0;
  for (const auto& p : points) {
    if (!(p.sigma > 0.0)) throw DomainError("uncertainties must be positive");
    const double w = 1.0 / (p.sigma * p.sigma);
    sbb += w * p.coefficient * p.coefficient;
    sby += w * p.coefficient * (p.value - p.fixed);
    max_b = std::max(max_b, std::abs(p.coefficient) / p.sigma);
  }
  if (!(max_b > 1e-12)) throw DomainError("degenerate basis: the free material does not affect the model");
  LossTangentFit f;
  f.tan_delta = sby / sbb;
  f.sigma = 1.0 / std::sqrt(sbb);
  double chi2 = 0.0, normal = 0.0, norm = 0.0;
  for (const auto& p : points) {
    const double w = 1.0 / (p.sigma * p.sigma);
    const double r = p.value - p.fixed - p.coefficient * f.tan_delta;
    chi2 += w * r * r;
    normal += w * p.coefficient * r;
    norm += w * std::abs(p.coefficient * (p.value - p.fixed));
  }
  f.reduced_chi_square = points.size() > 1 ? chi2 / static_cast<double>(points.size() - 1) : 0.0;
  f.normal_residual = norm > 0.0 ? std::abs(normal) / norm : 0.0;
  return f;
}

}  // namespace dielnoise
