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

#include "dielnoise/material.hpp"

#include <nlohmann/json.hpp>

#include "dielnoise/errors.hpp"
#include "dielnoise/units.hpp"

namespace dielnoise {

namespace detail {
extern const std::string_view kBundledMaterials;
}

void Material::validate() const {
  if (!(eps_r >= 1.0)) throw DomainError("material '" + name + "': eps_r must be >= 1");
  if (!(tan_delta >= 0.0)) throw DomainError("material '" + name + "': tan_delta must be >= 0");
  if (!(temperature > 0.0)) throw DomainError("material '" + name + "': temperature must be > 0");
}

MaterialDatabase MaterialDatabase::from_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("material database: ") + e.what());
  }
  if (!doc.contains("materials") || !doc["materials"].is_array()) {
    throw ConfigError("material database: missing 'materials' array");
  }
  MaterialDatabase db;
  for (const auto& item : doc["materials"]) {
    Material m;
    m.name = item.at("name").get<std::string>();
    m.eps_r = item.at("eps_r").get<double>();
    m.tan_delta = item.at("tan_delta").get<double>();
    m.temperature = item.contains("temperature")
                        ? units::temperature(item["temperature"].get<std::string>())
                        : kDefaultTemperature;
    db.add(std::move(m));
  }
  return db;
}

const MaterialDatabase& MaterialDatabase::bundled() {
  static const MaterialDatabase db = from_json(detail::kBundledMaterials);
  return db;
}

void MaterialDatabase::add(Material m) {
  m.validate();
  auto name = m.name;
  items_.insert_or_assign(std::move(name), std::move(m));
}

bool MaterialDatabase::contains(std::string_view name) const {
  return items_.find(name) != items_.end();
}

const Material& MaterialDatabase::get(std::string_view name) const {
  auto it = items_.find(name);
  if (it == items_.end()) throw UnknownMaterialError(std::string(name));
  return it->second;
}

std::vector<std::string> MaterialDatabase::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : items_) out.push_back(k);
  return out;
}

Material material_lookup(std::string_view name) { return MaterialDatabase::bundled().get(name); }

}  // namespace dielnoise
