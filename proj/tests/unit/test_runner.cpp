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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "dielnoise/errors.hpp"
#include "dielnoise/runner.hpp"

using namespace dielnoise;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dielnoise-unit-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path write(const fs::path& dir, const std::string& name, const std::string& text) {
  std::ofstream(dir / name) << text;
  return dir / name;
}

const std::string kScenarios = std::string(DIELNOISE_SOURCE_DIR) + "/scenarios/";

}  // namespace

TEST_SUITE("runner") {
  TEST_CASE("FNV-1a reference values") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
  }

  TEST_CASE("presets are recognised") {
    CHECK(preset_names().size() == 6);
    CHECK(is_preset("nano-patch"));
    CHECK(is_preset("infinite-plane-validation"));
    CHECK_FALSE(is_preset("scenarios/x.json"));
  }

  TEST_CASE("output directory comes from the environment") {
    ::setenv(kOutputDirEnv, "/tmp/somewhere", 1);
    CHECK(default_output_dir() == fs::path("/tmp/somewhere"));
    ::unsetenv(kOutputDirEnv);
    CHECK(default_output_dir() == fs::path("noise-output"));
  }

  TEST_CASE("analytic scenarios write deterministic tables and a manifest") {
    const fs::path out = scratch("analytic");
    RunOptions o;
    o.output_dir = out / "a";
    const RunResult a = run(kScenarios + "sio2_slab_analytic.json", o);
    o.output_dir = out / "b";
    const RunResult b = run(kScenarios + "sio2_slab_analytic.json", o);
    REQUIRE(a.ok);
    CHECK(a.id == "sio2-slab-analytic");
    const std::string ta = slurp(a.directory / "analytic.csv");
    CHECK(ta == slurp(b.directory / "analytic.csv"));
    CHECK(ta.rfind("z_um,f_MHz,g_parallel,g_perp,S_parallel,S_perp\n", 0) == 0);
    const auto m = nlohmann::json::parse(slurp(a.directory / "manifest.json"));
    CHECK(m["status"] == "ok");
    CHECK(m["config_hash"] == nlohmann::json::parse(slurp(b.directory / "manifest.json"))["config_hash"]);
    CHECK(m["files"][0]["name"] == "analytic.csv");
    CHECK(m.contains("tolerances"));
  }

  TEST_CASE("schema violations are configuration errors") {
    const fs::path dir = scratch("schema");
    RunOptions o;
    o.output_dir = dir / "out";
    CHECK_THROWS_AS(run(write(dir, "empty.json",
                              R"({"id":"e","kind":"analytic","stack":{"substrate":"SiO2"},"sweep":[]})")
                            .string(),
                        o),
                    ConfigError);
    CHECK_THROWS_AS(run(write(dir, "kind.json", R"({"id":"e","kind":"movie","sweep":[{}]})").string(), o),
                    ConfigError);
    CHECK_THROWS_AS(run(write(dir, "json.json", "{ not json").string(), o), ConfigError);
    CHECK_THROWS_AS(
        run(write(dir, "id.json",
                  R"({"id":"../x","kind":"analytic","stack":{"substrate":"SiO2"},"sweep":[{"z":"1um","frequency":"1MHz"}]})")
                .string(),
            o),
        ConfigError);
    CHECK_THROWS_AS(
        run(write(dir, "z.json",
                  R"({"id":"z","kind":"analytic","stack":{"substrate":"SiO2"},"sweep":[{"z":"-1um","frequency":"1MHz"}]})")
                .string(),
            o),
        ConfigError);
    CHECK_THROWS_AS(run((dir / "missing.json").string(), o), ConfigError);
    CHECK_FALSE(fs::exists(dir / "out"));
  }

  TEST_CASE("scene sweep points inside a dielectric are rejected") {
    std::string doc = slurp(kScenarios + "disk_scene.json");
    doc.replace(doc.find("\"500um\""), 7, "\"-50um\"");
    const fs::path dir = scratch("inside");
    RunOptions o;
    o.output_dir = dir / "out";
    CHECK_THROWS_AS(run(write(dir, "inside.json", doc).string(), o), ConfigError);
  }

  TEST_CASE("preset tables do not depend on the thread count") {
    const fs::path out = scratch("threads");
    RunOptions o;
    o.convergence_check = false;
    o.output_dir = out / "one";
    o.threads = 1;
    const RunResult a = run("infinite-plane-validation", o);
    o.output_dir = out / "three";
    o.threads = 3;
    const RunResult b = run("infinite-plane-validation", o);
    REQUIRE(a.ok);
    REQUIRE(b.ok);
    CHECK(slurp(a.directory / "plane_validation.csv") == slurp(b.directory / "plane_validation.csv"));
    const auto m = nlohmann::json::parse(slurp(a.directory / "manifest.json"));
    CHECK(m["summary"]["max_relative_deviation"].get<double>() < 0.15);
  }
}
