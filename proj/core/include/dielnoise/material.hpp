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

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace dielnoise {

/// Linear isotropic dielectric, ε = ε₀ ε_r (1 + i tan δ).
struct Material {
  std::string name;
  double eps_r = 1.0;
  double tan_delta = 0.0;
  double temperature = 300.0;  // K

  /// Throws DomainError unless eps_r >= 1, tan_delta >= 0, temperature > 0.
  void validate() const;

  friend bool operator==(const Material&, const Material&) = default;
};

inline constexpr double kDefaultTemperature = 300.0;

/// Named materials loaded from a JSON document of the form
/// {"materials": [{"name", "eps_r", "tan_delta", "temperature"}]}.
class MaterialDatabase {
 public:
  MaterialDatabase() = default;

  static MaterialDatabase from_json(std::string_view json_text);
  /// The database shipped with the library (SiO2, Ta2O5).
  static const MaterialDatabase& bundled();

  void add(Material m);
  bool contains(std::string_view name) const;
  /// Throws UnknownMaterialError.
  const Material& get(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, Material, std::less<>> items_;
};

/// Looks `name` up in the bundled database.
Material material_lookup(std::string_view name);

}  // namespace dielnoise
