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

#include "dielnoise/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "dielnoise/errors.hpp"
#include "dielnoise/units.hpp"

namespace dielnoise {

using nlohmann::json;

GridRules GridRules::preset(Resolution r) {
  GridRules g;
  switch (r) {
    case Resolution::Coarse:
      g.cells_per_distance = 5.0;
      g.growth = 1.35;
      g.cells_per_radius = 6.0;
      break;
    case Resolution::Paper:
      g.cells_per_distance = 10.0;
      g.growth = 1.2;
      g.cells_per_radius = 12.0;
      break;
  }
  return g;
}

std::vector<Body> Scene::bodies() const {
  std::vector<Body> out;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    auto parts = regions[i].bodies(static_cast<int>(i));
    out.insert(out.end(), parts.begin(), parts.end());
  }
  return out;
}

double Scene::nearest_region_distance() const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& r : regions) d = std::min(d, r.distance(charge.position));
  return d;
}

namespace {

void check_positive(double v, const std::string& what) {
  if (!(v > 0.0)) throw GeometryError(what + " must be > 0");
}

void validate_shape(const DielectricRegion& r) {
  if (const auto* c = std::get_if<Cylinder>(&r.shape)) {
    check_positive(c->radius, r.name + ": cylinder radius");
    check_positive(c->length, r.name + ": cylinder length");
    if (std::abs(c->axis.norm() - 1.0) > 1e-12) throw GeometryError(r.name + ": axis not unit");
    r.material.validate();
  } else if (const auto* b = std::get_if<Box>(&r.shape)) {
    for (int k = 0; k < 3; ++k) check_positive(b->hi[k] - b->lo[k], r.name + ": box extent");
    r.material.validate();
  } else {
    const auto& s = std::get<LayeredStack>(r.shape);
    check_positive(s.radius, r.name + ": stack radius");
    if (s.layers.empty()) throw GeometryError(r.name + ": stack has no layers");
    if (std::abs(s.axis.norm() - 1.0) > 1e-12) throw GeometryError(r.name + ": axis not unit");
    for (const auto& l : s.layers) {
      check_positive(l.thickness, r.name + ": layer thickness");
      l.material.validate();
    }
  }
}

}  // namespace

void Scene::validate() const {
  const Charge& ch = charge;
  if (std::abs(ch.displacement_axis.norm() - 1.0) > 1e-12) {
    throw DomainError("displacement axis must be a unit vector");
  }
  if (!(ch.delta_zeta > 0.0)) throw DomainError("delta_zeta must be > 0");
  if (!(ch.mass > 0.0)) throw DomainError("charge mass must be > 0");
  if (ch.q == 0.0) throw DomainError("charge q must be non-zero");
  for (int k = 0; k < 3; ++k) {
    if (!(domain.hi[k] > domain.lo[k])) throw GeometryError("domain has non-positive extent");
  }
  if (!domain.contains_strictly(ch.position)) {
    throw GeometryError("charge position is not strictly inside the domain");
  }
  for (const auto& r : regions) validate_shape(r);

  const auto all = bodies();
  for (const auto& b : all) {
    const Box bb = b.bounds();
    for (int k = 0; k < 3; ++k) {
      if (!(bb.lo[k] > domain.lo[k] && bb.hi[k] < domain.hi[k])) {
        throw GeometryError("region '" + regions[b.region].name + "' extends outside the domain");
      }
    }
    if (!(b.distance(ch.position) > 0.0)) {
      throw GeometryError("charge lies inside region '" + regions[b.region].name + "'");
    }
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (bodies_overlap(all[i], all[j])) {
        throw GeometryError("regions '" + regions[all[i].region].name + "' and '" +
                            regions[all[j].region].name + "' overlap");
      }
    }
  }
  if (!regions.empty()) {
    const double d = nearest_region_distance();
    if (!(ch.delta_zeta < d / 10.0)) {
      throw DomainError("delta_zeta must be below a tenth of the charge-region distance");
    }
    for (int k = 0; k < 3; ++k) {
      if (ch.position[k] - domain.lo[k] < 5.0 * d || domain.hi[k] - ch.position[k] < 5.0 * d) {
        throw GeometryError("domain must extend at least 5x the charge-region distance from "
                            "the charge along every axis");
      }
    }
  }
  if (grid.faces) {
    for (int k = 0; k < 3; ++k) {
      const auto& f = (*grid.faces)[k];
      if (f.size() < 2 || !std::is_sorted(f.begin(), f.end()) ||
          std::adjacent_find(f.begin(), f.end()) != f.end()) {
        throw ConfigError("explicit grid faces must be strictly increasing");
      }
      if (f.front() != domain.lo[k] || f.back() != domain.hi[k]) {
        throw ConfigError("explicit grid faces must span the domain exactly");
      }
    }
  }
}

Scene Scene::scaled(double s) const {
  Scene out = *this;
  out.charge.position = charge.position * s;
  out.charge.delta_zeta = charge.delta_zeta * s;
  out.domain = Box{domain.lo * s, domain.hi * s};
  for (auto& r : out.regions) {
    if (auto* c = std::get_if<Cylinder>(&r.shape)) {
      c->center = c->center * s;
      c->radius *= s;
      c->length *= s;
    } else if (auto* b = std::get_if<Box>(&r.shape)) {
      *b = Box{b->lo * s, b->hi * s};
    } else {
      auto& st = std::get<LayeredStack>(r.shape);
      st.top_center = st.top_center * s;
      st.radius *= s;
      for (auto& l : st.layers) l.thickness *= s;
    }
  }
  if (out.grid.faces) {
    for (auto& axis : *out.grid.faces) {
      for (auto& v : axis) v *= s;
    }
  }
  return out;
}

Scene Scene::with_axis(const Vec3& axis) const {
  Scene out = *this;
  const double n = axis.norm();
  if (!(n > 0.0)) throw DomainError("displacement axis must be non-zero");
  out.charge.displacement_axis = axis * (1.0 / n);
  return out;
}

// --- document parsing --------------------------------------------------------

namespace {

const json& require(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ConfigError(ctx + ": missing '" + key + "'");
  }
  return obj.at(key);
}

double length_of(const json& v, const std::string& ctx) {
  if (!v.is_string()) throw ConfigError(ctx + ": lengths must be strings with a unit suffix");
  return units::length(v.get<std::string>());
}

Vec3 point_of(const json& v, const std::string& ctx) {
  if (!v.is_array() || v.size() != 3) throw ConfigError(ctx + ": expected a 3-vector");
  return {length_of(v[0], ctx), length_of(v[1], ctx), length_of(v[2], ctx)};
}

Vec3 axis_of(const json& v, const std::string& ctx) {
  Vec3 a;
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    double sign = 1.0;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
      sign = s[0] == '-' ? -1.0 : 1.0;
      s.erase(0, 1);
    }
    if (s == "x") a = {sign, 0, 0};
    else if (s == "y") a = {0, sign, 0};
    else if (s == "z") a = {0, 0, sign};
    else throw ConfigError(ctx + ": unknown axis '" + v.get<std::string>() + "'");
    return a;
  }
  if (!v.is_array() || v.size() != 3) throw ConfigError(ctx + ": axis must be x/y/z or a 3-vector");
  a = {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  const double n = a.norm();
  if (!(n > 0.0)) throw ConfigError(ctx + ": zero axis");
  // Leave unit input untouched so documents round-trip bit-identically.
  return std::abs(n - 1.0) < 1e-14 ? a : a * (1.0 / n);
}

Material material_of(const json& v, const MaterialDatabase& local, const MaterialDatabase& db,
                     const std::string& ctx) {
  if (v.is_string()) {
    const auto name = v.get<std::string>();
    if (local.contains(name)) return local.get(name);
    return db.get(name);
  }
  if (!v.is_object()) throw ConfigError(ctx + ": material must be a name or an object");
  Material m;
  m.name = v.value("name", std::string("custom"));
  m.eps_r = require(v, "eps_r", ctx).get<double>();
  m.tan_delta = require(v, "tan_delta", ctx).get<double>();
  m.temperature = v.contains("temperature")
                      ? units::temperature(v["temperature"].get<std::string>())
                      : kDefaultTemperature;
  m.validate();
  return m;
}

DielectricRegion region_of(const json& v, std::size_t index, const MaterialDatabase& local,
                           const MaterialDatabase& db) {
  DielectricRegion r;
  r.name = v.value("name", "region" + std::to_string(index));
  const std::string ctx = "region '" + r.name + "'";
  const auto type = require(v, "type", ctx).get<std::string>();
  if (type == "cylinder") {
    Cylinder c;
    c.center = point_of(require(v, "center", ctx), ctx);
    c.axis = v.contains("axis") ? axis_of(v["axis"], ctx) : Vec3{0, 0, 1};
    c.radius = length_of(require(v, "radius", ctx), ctx);
    c.length = length_of(require(v, "length", ctx), ctx);
    r.shape = c;
    r.material = material_of(require(v, "material", ctx), local, db, ctx);
  } else if (type == "box") {
    r.shape = Box{point_of(require(v, "min", ctx), ctx), point_of(require(v, "max", ctx), ctx)};
    r.material = material_of(require(v, "material", ctx), local, db, ctx);
  } else if (type == "stack") {
    LayeredStack s;
    s.top_center = point_of(require(v, "top_center", ctx), ctx);
    s.axis = v.contains("axis") ? axis_of(v["axis"], ctx) : Vec3{0, 0, 1};
    s.radius = length_of(require(v, "radius", ctx), ctx);
    if (v.contains("layers")) {
      for (const auto& l : v["layers"]) {
        s.layers.push_back(Layer{material_of(require(l, "material", ctx), local, db, ctx),
                                 length_of(require(l, "thickness", ctx), ctx)});
      }
    }
    if (v.contains("alternating")) {
      const auto& alt = v["alternating"];
      const auto& mats = require(alt, "materials", ctx);
      const int count = require(alt, "count", ctx).get<int>();
      const double t = length_of(require(alt, "thickness", ctx), ctx);
      if (!mats.is_array() || mats.empty() || count < 1) {
        throw ConfigError(ctx + ": 'alternating' needs materials and a positive count");
      }
      for (int i = 0; i < count; ++i) {
        s.layers.push_back(Layer{material_of(mats[i % mats.size()], local, db, ctx), t});
      }
    }
    if (s.layers.empty()) throw ConfigError(ctx + ": stack needs 'layers' or 'alternating'");
    r.material = s.layers.front().material;
    r.shape = std::move(s);
  } else {
    throw ConfigError(ctx + ": unknown region type '" + type + "'");
  }
  return r;
}

GridSpec grid_of(const json& v, const Box& domain) {
  GridSpec g;
  if (v.contains("x") || v.contains("y") || v.contains("z")) {
    std::array<std::vector<double>, 3> faces;
    const char* names[3] = {"x", "y", "z"};
    for (int k = 0; k < 3; ++k) {
      for (const auto& f : require(v, names[k], "grid")) faces[k].push_back(length_of(f, "grid"));
    }
    g.faces = std::move(faces);
    (void)domain;
    return g;
  }
  const auto res = v.value("resolution", std::string("coarse"));
  if (res == "coarse") g.rules = GridRules::preset(Resolution::Coarse);
  else if (res == "paper") g.rules = GridRules::preset(Resolution::Paper);
  else if (res != "custom") throw ConfigError("grid: unknown resolution '" + res + "'");
  g.rules.cells_per_distance = v.value("cells_per_distance", g.rules.cells_per_distance);
  g.rules.growth = v.value("growth", g.rules.growth);
  g.rules.min_cells_per_layer = v.value("min_cells_per_layer", g.rules.min_cells_per_layer);
  g.rules.cells_per_radius = v.value("cells_per_radius", g.rules.cells_per_radius);
  g.rules.max_cell_fraction = v.value("max_cell_fraction", g.rules.max_cell_fraction);
  g.rules.refinement = v.value("refinement", g.rules.refinement);
  if (!(g.rules.growth > 1.0) || !(g.rules.cells_per_distance > 0) || g.rules.min_cells_per_layer < 1 ||
      !(g.rules.refinement > 0) || !(g.rules.max_cell_fraction > 0)) {
    throw ConfigError("grid: invalid refinement rules");
  }
  return g;
}

json length_json(double v) { return units::format(v, units::Dimension::Length); }

json point_json(const Vec3& p) { return json::array({length_json(p.x), length_json(p.y), length_json(p.z)}); }

json material_json(const Material& m) {
  return json{{"name", m.name},
              {"eps_r", m.eps_r},
              {"tan_delta", m.tan_delta},
              {"temperature", units::format(m.temperature, units::Dimension::Temperature)}};
}

json axis_json(const Vec3& a) { return json::array({a.x, a.y, a.z}); }

}  // namespace

Scene build_scene(std::string_view json_text, const MaterialDatabase& db) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scene document: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("scene document must be a JSON object");

  MaterialDatabase local;
  if (doc.contains("materials")) {
    local = MaterialDatabase::from_json(json{{"materials", doc["materials"]}}.dump());
  }

  Scene s;
  const auto& ch = require(doc, "charge", "scene");
  s.charge.position = point_of(require(ch, "position", "charge"), "charge");
  if (ch.contains("q")) s.charge.q = units::charge(ch["q"].get<std::string>());
  if (ch.contains("mass")) s.charge.mass = units::mass(ch["mass"].get<std::string>());
  if (ch.contains("axis")) s.charge.displacement_axis = axis_of(ch["axis"], "charge");
  if (ch.contains("delta_zeta")) s.charge.delta_zeta = length_of(ch["delta_zeta"], "charge");

  if (doc.contains("regions")) {
    const auto& regs = doc["regions"];
    if (!regs.is_array()) throw ConfigError("scene: 'regions' must be an array");
    for (std::size_t i = 0; i < regs.size(); ++i) s.regions.push_back(region_of(regs[i], i, local, db));
  }
  const auto& dom = require(doc, "domain", "scene");
  s.domain = Box{point_of(require(dom, "min", "domain"), "domain"),
                 point_of(require(dom, "max", "domain"), "domain")};
  s.grid = grid_of(doc.value("grid", json::object()), s.domain);
  s.validate();
  return s;
}

std::string scene_to_json(const Scene& scene) {
  json doc;
  doc["charge"] = {{"q", units::format(scene.charge.q, units::Dimension::Charge)},
                   {"mass", units::format(scene.charge.mass, units::Dimension::Mass)},
                   {"position", point_json(scene.charge.position)},
                   {"axis", axis_json(scene.charge.displacement_axis)},
                   {"delta_zeta", length_json(scene.charge.delta_zeta)}};
  json regs = json::array();
  for (const auto& r : scene.regions) {
    json j;
    j["name"] = r.name;
    if (const auto* c = std::get_if<Cylinder>(&r.shape)) {
      j["type"] = "cylinder";
      j["center"] = point_json(c->center);
      j["axis"] = axis_json(c->axis);
      j["radius"] = length_json(c->radius);
      j["length"] = length_json(c->length);
      j["material"] = material_json(r.material);
    } else if (const auto* b = std::get_if<Box>(&r.shape)) {
      j["type"] = "box";
      j["min"] = point_json(b->lo);
      j["max"] = point_json(b->hi);
      j["material"] = material_json(r.material);
    } else {
      const auto& st = std::get<LayeredStack>(r.shape);
      j["type"] = "stack";
      j["top_center"] = point_json(st.top_center);
      j["axis"] = axis_json(st.axis);
      j["radius"] = length_json(st.radius);
      json layers = json::array();
      for (const auto& l : st.layers) {
        layers.push_back({{"material", material_json(l.material)}, {"thickness", length_json(l.thickness)}});
      }
      j["layers"] = std::move(layers);
    }
    regs.push_back(std::move(j));
  }
  doc["regions"] = std::move(regs);
  doc["domain"] = {{"min", point_json(scene.domain.lo)}, {"max", point_json(scene.domain.hi)}};
  if (scene.grid.faces) {
    json g;
    const char* names[3] = {"x", "y", "z"};
    for (int k = 0; k < 3; ++k) {
      json arr = json::array();
      for (double f : (*scene.grid.faces)[k]) arr.push_back(length_json(f));
      g[names[k]] = std::move(arr);
    }
    doc["grid"] = std::move(g);
  } else {
    const auto& r = scene.grid.rules;
    doc["grid"] = {{"resolution", "custom"},
                   {"cells_per_distance", r.cells_per_distance},
                   {"growth", r.growth},
                   {"min_cells_per_layer", r.min_cells_per_layer},
                   {"cells_per_radius", r.cells_per_radius},
                   {"max_cell_fraction", r.max_cell_fraction},
                   {"refinement", r.refinement}};
  }
  return doc.dump(2);
}

}  // namespace dielnoise
