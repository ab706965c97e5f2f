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

#include <string>

#include "dielnoise/errors.hpp"
#include "dielnoise/presets.hpp"
#include "dielnoise/scene.hpp"

using namespace dielnoise;

namespace {

std::string disk_scene(const std::string& z, const std::string& extra_region = "") {
  return R"({
    "charge": {"position": ["0um", "0um", ")" + z + R"("], "axis": "z", "delta_zeta": "5um"},
    "regions": [
      {"name": "disk", "type": "cylinder", "center": ["0um", "0um", "-125um"],
       "radius": "3mm", "length": "250um", "material": "SiO2"})" +
         extra_region + R"(
    ],
    "domain": {"min": ["-4mm", "-4mm", "-4mm"], "max": ["4mm", "4mm", "4mm"]},
    "grid": {"resolution": "coarse"}
  })";
}

}  // namespace

TEST_SUITE("scene") {
  TEST_CASE("a valid scene parses") {
    const Scene s = build_scene(disk_scene("300um"));
    REQUIRE(s.regions.size() == 1);
    CHECK(s.regions[0].name == "disk");
    CHECK(s.regions[0].material.name == "SiO2");
    CHECK(s.charge.position.z == doctest::Approx(300e-6));
    CHECK(s.nearest_region_distance() == doctest::Approx(300e-6));
  }

  TEST_CASE("serialisation round-trips exactly") {
    const Scene a = build_scene(disk_scene("300um"));
    const Scene b = build_scene(scene_to_json(a));
    CHECK(a == b);
    const Scene f = presets::fiber_scene(450e-6, presets::FiberSpec{}, -1, Resolution::Coarse);
    CHECK(build_scene(scene_to_json(f)) == f);
  }

  TEST_CASE("charge inside a dielectric is rejected") {
    CHECK_THROWS_AS(build_scene(disk_scene("-100um")), GeometryError);
  }

  TEST_CASE("overlapping regions are rejected") {
    const std::string overlap = R"(,
      {"name": "block", "type": "box", "min": ["-1mm", "-1mm", "-200um"], "max": ["1mm", "1mm", "-50um"],
       "material": "Ta2O5"})";
    CHECK_THROWS_AS(build_scene(disk_scene("300um", overlap)), GeometryError);
  }

  TEST_CASE("a domain that is too small is rejected") {
    const std::string doc = R"({
      "charge": {"position": ["0um", "0um", "300um"]},
      "regions": [{"type": "box", "min": ["-1mm", "-1mm", "-1mm"], "max": ["1mm", "1mm", "0um"],
                   "material": "SiO2"}],
      "domain": {"min": ["-1mm", "-1mm", "-1mm"], "max": ["1mm", "1mm", "1mm"]}
    })";
    CHECK_THROWS_AS(build_scene(doc), GeometryError);
  }

  TEST_CASE("delta zeta must be small against the distance") {
    std::string doc = disk_scene("300um");
    doc.replace(doc.find("\"5um\""), 5, "\"40um\"");
    CHECK_THROWS_AS(build_scene(doc), DomainError);
  }

  TEST_CASE("schema violations are configuration errors") {
    CHECK_THROWS_AS(build_scene("not json"), ConfigError);
    CHECK_THROWS_AS(build_scene(R"({"charge": {"position": ["0um","0um","1um"]}})"), ConfigError);
    std::string bad_type = disk_scene("300um");
    bad_type.replace(bad_type.find("cylinder"), 8, "sphere__");
    CHECK_THROWS_AS(build_scene(bad_type), ConfigError);
    std::string no_unit = disk_scene("300um");
    no_unit.replace(no_unit.find("\"3mm\""), 5, "0.003");
    CHECK_THROWS_AS(build_scene(no_unit), ConfigError);
    std::string unknown = disk_scene("300um");
    unknown.replace(unknown.find("SiO2"), 4, "GaAs");
    CHECK_THROWS_AS(build_scene(unknown), UnknownMaterialError);
  }

  TEST_CASE("alternating stacks expand into layers") {
    const std::string doc = R"({
      "charge": {"position": ["0um", "0um", "450um"]},
      "regions": [{"name": "coating", "type": "stack", "top_center": ["0um", "0um", "0um"], "axis": "-z",
                   "radius": "115um",
                   "alternating": {"materials": ["SiO2", "Ta2O5"], "count": 41, "thickness": "250nm"}}],
      "domain": {"min": ["-3mm", "-3mm", "-3mm"], "max": ["3mm", "3mm", "3mm"]}
    })";
    const Scene s = build_scene(doc);
    const auto& st = std::get<LayeredStack>(s.regions[0].shape);
    REQUIRE(st.layers.size() == 41);
    CHECK(st.layers.front().material.name == "SiO2");
    CHECK(st.layers[1].material.name == "Ta2O5");
    CHECK(st.layers.back().material.name == "SiO2");
    CHECK(st.total_thickness() == doctest::Approx(41 * 250e-9));
  }

  TEST_CASE("scaling multiplies every length") {
    const Scene a = build_scene(disk_scene("300um"));
    const Scene b = a.scaled(2.0);
    CHECK(b.charge.position.z == doctest::Approx(600e-6));
    CHECK(b.charge.delta_zeta == doctest::Approx(10e-6));
    CHECK(std::get<Cylinder>(b.regions[0].shape).radius == doctest::Approx(6e-3));
  }

  TEST_CASE("presets follow the fiber geometry") {
    const auto pair = presets::fiber_pair(300e-6, Resolution::Coarse);
    CHECK(pair[0].nearest_region_distance() == doctest::Approx(300e-6));
    CHECK(pair[1].nearest_region_distance() == doctest::Approx(300e-6));
    CHECK(std::get<LayeredStack>(pair[0].regions[0].shape).layers.size() == 41);
    CHECK(std::get<LayeredStack>(pair[1].regions[0].shape).layers.size() == 47);
    CHECK(presets::sweep_distances().size() == 8);
    CHECK(presets::distance_table().size() == 9);
  }
}
