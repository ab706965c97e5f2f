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

#include "dielnoise/constants.hpp"
#include "dielnoise/errors.hpp"
#include "dielnoise/material.hpp"
#include "dielnoise/units.hpp"

using namespace dielnoise;

TEST_SUITE("units_material") {
  TEST_CASE("quantities with suffixes convert to SI") {
    CHECK(units::length("250um") == doctest::Approx(250e-6));
    CHECK(units::length("3 mm") == doctest::Approx(3e-3));
    CHECK(units::length("1nm") == doctest::Approx(1e-9));
    CHECK(units::length("2.5e-6m") == doctest::Approx(2.5e-6));
    CHECK(units::frequency("1.5MHz") == doctest::Approx(1.5e6));
    CHECK(units::frequency("100kHz") == doctest::Approx(1e5));
    CHECK(units::temperature("300K") == doctest::Approx(300.0));
    CHECK(units::charge("1e") == doctest::Approx(constants::e));
    CHECK(units::mass("40u") == doctest::Approx(40.0 * constants::amu));
    CHECK(units::time("20ms") == doctest::Approx(0.02));
  }

  TEST_CASE("malformed quantities are configuration errors") {
    CHECK_THROWS_AS(units::length("250"), ConfigError);
    CHECK_THROWS_AS(units::length("250MHz"), ConfigError);
    CHECK_THROWS_AS(units::length("abc um"), ConfigError);
    CHECK_THROWS_AS(units::frequency("1furlong"), ConfigError);
  }

  TEST_CASE("format and parse are inverse") {
    for (double v : {1e-9, 3.3e-4, 0.25, 17.0}) {
      CHECK(units::length(units::format(v, units::Dimension::Length)) == v);
    }
    CHECK(units::frequency(units::format(2.2e6, units::Dimension::Frequency)) == 2.2e6);
  }

  TEST_CASE("bundled database holds the two coating materials") {
    const auto& db = MaterialDatabase::bundled();
    const Material& s = db.get("SiO2");
    CHECK(s.eps_r == 3.9);
    CHECK(s.tan_delta == 1.3e-3);
    CHECK(s.temperature == 300.0);
    const Material& t = db.get("Ta2O5");
    CHECK(t.eps_r == 22.0);
    CHECK(t.tan_delta == 7e-3);
    CHECK_THROWS_AS(db.get("Unobtainium"), UnknownMaterialError);
    CHECK_THROWS_AS(material_lookup("GaAs"), UnknownMaterialError);
  }

  TEST_CASE("material validation") {
    CHECK_NOTHROW((Material{"ok", 2.0, 0.0, 4.0}.validate()));
    CHECK_THROWS_AS((Material{"low", 0.5, 1e-3, 300}.validate()), DomainError);
    CHECK_THROWS_AS((Material{"gain", 2.0, -1e-3, 300}.validate()), DomainError);
    CHECK_THROWS_AS((Material{"cold", 2.0, 1e-3, 0.0}.validate()), DomainError);
  }

  TEST_CASE("custom databases parse from JSON") {
    const auto db = MaterialDatabase::from_json(
        R"({"materials":[{"name":"Al2O3","eps_r":9.8,"tan_delta":1e-4,"temperature":"4K"}]})");
    CHECK(db.contains("Al2O3"));
    CHECK(db.get("Al2O3").temperature == 4.0);
    CHECK_THROWS_AS(MaterialDatabase::from_json("{"), ConfigError);
    CHECK_THROWS_AS(MaterialDatabase::from_json(R"({"materials":[{"name":"x","eps_r":0.2,"tan_delta":0}]})"),
                    Error);
  }
}
