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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dielnoise/scene.hpp"

namespace dielnoise {

/// Name of the environment variable that sets the default output directory.
inline constexpr const char* kOutputDirEnv = "DIELNOISE_OUTPUT_DIR";

struct RunOptions {
  /// Grid preset. Presets default to coarse; scenario files keep their own
  /// grid section unless this is set.
  std::optional<Resolution> resolution;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir;
  /// Evaluate fiber presets at d ± 55 µm as well and emit envelope columns.
  bool distance_band = true;
  /// At coarse resolution, repeat one solve on a twice-refined grid and
  /// record the change in the manifest.
  bool convergence_check = true;
  /// Measured data (CSV, see read_measurements). Enables χ² summaries.
  std::optional<std::filesystem::path> measurements;
  std::function<void(const std::string&)> log;
};

struct RunResult {
  std::string id;
  std::filesystem::path directory;
  std::vector<std::string> files;
  bool ok = true;
  std::string error;
};

const std::vector<std::string>& preset_names();
bool is_preset(std::string_view name);

/// Runs a bundled preset or a scenario file and writes CSV/JSON artifacts
/// plus manifest.json into output_dir/<id>/. Errors are reported through
/// RunResult (and the manifest) rather than thrown, except for invalid
/// scenario documents, which throw ConfigError before anything is written.
RunResult run(const std::string& preset_or_file, const RunOptions& options);

/// $DIELNOISE_OUTPUT_DIR if set and non-empty, otherwise ./noise-output.
std::filesystem::path default_output_dir();

/// 64-bit FNV-1a hash.
std::uint64_t fnv1a(std::string_view data);

}  // namespace dielnoise
