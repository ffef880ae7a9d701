/*
 * Copyright 2026 The saralert authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SARALERT_PIPELINE_HPP_
#define SARALERT_PIPELINE_HPP_

#include <filesystem>
#include <optional>

#include "saralert/forest_model.hpp"
#include "saralert/synth.hpp"

namespace saralert {

// Stage outputs, all under the configured out directory:
//   synth      scene/ (stack), truth.csv, samples_forest.csv,
//              samples_cleared.csv
//   calibrate  calibrated/ (stack)
//   bench      scores.csv
//   fit        model/ (baseline.raw + model.json), normality.csv
//   detect     alerts.csv, unevaluable.csv, series_<row>_<col>.csv
//   evaluate   evaluation.json
//
// Stages read the calibrated stack when out/calibrated exists, otherwise
// the configured stack path, otherwise out/scene; `pipeline` is literally
// the stages run in sequence over the same directory, so chaining equals
// composition. Floats in CSV/JSON are fixed to 6 significant digits.
struct PipelineConfig {
  std::filesystem::path stack_dir;
  std::filesystem::path out_dir;
  std::string band = "VV";
  std::string combination = "median9+frost9";
  std::vector<double> alphas{0.05, 0.01};
  int confirmation = 2;
  bool skip_nodata = false;
  std::optional<std::filesystem::path> samples_forest;
  std::optional<std::filesystem::path> samples_cleared;
  std::optional<DateInterval> calibration_window;

  std::optional<std::filesystem::path> terrain_dir;
  std::optional<double> incidence_deg;
  double look_azimuth_deg = 0.0;
  double lia_max_deg = 78.0;

  double frost_damping = 1.0;
  double lee_nominal_looks = 4.7;

  std::uint64_t seed = 0;
  int threads = 0;
  int series_dump_limit = 16;
  bool bench = false;  // run the 25-combination bench inside `pipeline`
  std::optional<SceneConfig> scene;

  static PipelineConfig from_json_file(const std::filesystem::path& path);
  void validate() const;
};

void run_synth(const PipelineConfig& cfg);
void run_calibrate(const PipelineConfig& cfg);
void run_bench(const PipelineConfig& cfg);
void run_fit(const PipelineConfig& cfg);
void run_detect(const PipelineConfig& cfg);
void run_evaluate(const PipelineConfig& cfg);
void run_pipeline(const PipelineConfig& cfg);

/// The stack directory a processing stage would read, following the rule
/// above. Throws ConfigError when nothing resolves.
std::filesystem::path resolve_stack_dir(const PipelineConfig& cfg);

}  // namespace saralert

#endif  // SARALERT_PIPELINE_HPP_
