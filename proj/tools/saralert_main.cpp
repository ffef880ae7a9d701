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

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "saralert/kernels.hpp"
#include "saralert/pipeline.hpp"

namespace {

// Exit codes: 0 success, 1 usage/config error, 2 data error, 3 internal.
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

void print_error(const std::string& stage, const std::string& kind,
                 const std::string& message) {
  nlohmann::ordered_json err;
  err["error"]["stage"] = stage;
  err["error"]["kind"] = kind;
  err["error"]["message"] = message;
  std::cerr << err.dump() << "\n";
}

struct CliOverrides {
  std::string config;
  std::string stack;
  std::string out;
  std::string band;
  std::string combination;
  std::string samples_forest;
  std::string samples_cleared;
  std::vector<double> alphas;
  int confirmation = -1;
  long long seed = -1;
  int threads = -1;
  int series_dump_limit = -1;
  double incidence_deg = std::numeric_limits<double>::quiet_NaN();
  double look_azimuth_deg = std::numeric_limits<double>::quiet_NaN();
  double lia_max_deg = std::numeric_limits<double>::quiet_NaN();
  std::string terrain;
  bool skip_nodata = false;
  bool bench = false;
  std::string kernels = "auto";
};

void add_common_options(CLI::App* cmd, CliOverrides& o) {
  cmd->add_option("--config", o.config, "JSON config file");
  cmd->add_option("--stack", o.stack, "input stack directory");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--band", o.band, "band to process (e.g. VV)");
  cmd->add_option("--combination", o.combination,
                  "filter combination '<temporal>+<spatial>' or 'bench'");
  cmd->add_option("--samples-forest", o.samples_forest,
                  "invariant-forest sample CSV");
  cmd->add_option("--samples-cleared", o.samples_cleared,
                  "cleared-forest sample CSV");
  cmd->add_option("--alpha", o.alphas, "significance level(s)");
  cmd->add_option("--confirmation", o.confirmation,
                  "consecutive breaches to confirm an alert");
  cmd->add_option("--seed", o.seed, "random seed (synth)");
  cmd->add_option("--threads", o.threads, "worker thread cap");
  cmd->add_option("--series-dump-limit", o.series_dump_limit,
                  "max per-location series CSVs written by detect");
  cmd->add_option("--incidence-deg", o.incidence_deg,
                  "ellipsoid incidence angle (degrees, for calibrate)");
  cmd->add_option("--look-azimuth-deg", o.look_azimuth_deg,
                  "sensor look azimuth (degrees from north)");
  cmd->add_option("--lia-max-deg", o.lia_max_deg,
                  "mask pixels with local incidence above this");
  cmd->add_option("--terrain", o.terrain, "terrain directory (slope/aspect)");
  cmd->add_flag("--skip-nodata", o.skip_nodata,
                "no-data observations do not reset the breach run");
  cmd->add_flag("--bench", o.bench, "run the 25-combination bench in pipeline");
  cmd->add_option("--kernels", o.kernels,
                  "kernel backend: auto, scalar or avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
}

saralert::PipelineConfig build_config(const CliOverrides& o) {
  saralert::PipelineConfig cfg;
  if (!o.config.empty())
    cfg = saralert::PipelineConfig::from_json_file(o.config);
  if (!o.stack.empty()) cfg.stack_dir = o.stack;
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (!o.band.empty()) cfg.band = o.band;
  if (!o.combination.empty()) cfg.combination = o.combination;
  if (!o.samples_forest.empty()) cfg.samples_forest = o.samples_forest;
  if (!o.samples_cleared.empty()) cfg.samples_cleared = o.samples_cleared;
  if (!o.alphas.empty()) cfg.alphas = o.alphas;
  if (o.confirmation > 0) cfg.confirmation = o.confirmation;
  if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
  if (o.threads > 0) cfg.threads = o.threads;
  if (o.series_dump_limit >= 0) cfg.series_dump_limit = o.series_dump_limit;
  if (!std::isnan(o.incidence_deg)) cfg.incidence_deg = o.incidence_deg;
  if (!std::isnan(o.look_azimuth_deg))
    cfg.look_azimuth_deg = o.look_azimuth_deg;
  if (!std::isnan(o.lia_max_deg)) cfg.lia_max_deg = o.lia_max_deg;
  if (!o.terrain.empty()) cfg.terrain_dir = o.terrain;
  if (o.skip_nodata) cfg.skip_nodata = true;
  if (o.bench) cfg.bench = true;

  using saralert::kernels::Backend;
  if (o.kernels == "scalar")
    saralert::kernels::select_backend(Backend::kScalar);
  else if (o.kernels == "avx2")
    saralert::kernels::select_backend(Backend::kAvx2);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SAR change-detection pipeline for early deforestation "
               "warnings"};
  app.require_subcommand(1);

  CliOverrides overrides;
  const char* names[] = {"synth",  "calibrate", "bench",   "fit",
                         "detect", "evaluate",  "pipeline"};
  const char* descriptions[] = {
      "generate a synthetic scene with known ground truth",
      "convert sigma0 to gamma0 using the local incidence angle",
      "score the 25 filter combinations (ENL + Range)",
      "fit the forest baseline model and normality tables",
      "run the confirmed-alert detector over the sample locations",
      "score alerts against the sample classes (CE/OE/MD)",
      "run all configured stages in sequence"};
  for (std::size_t i = 0; i < std::size(names); ++i)
    add_common_options(app.add_subcommand(names[i], descriptions[i]),
                       overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const std::string stage = app.get_subcommands().front()->get_name();
  try {
    saralert::PipelineConfig cfg = build_config(overrides);
    if (stage == "synth")
      saralert::run_synth(cfg);
    else if (stage == "calibrate")
      saralert::run_calibrate(cfg);
    else if (stage == "bench")
      saralert::run_bench(cfg);
    else if (stage == "fit")
      saralert::run_fit(cfg);
    else if (stage == "detect")
      saralert::run_detect(cfg);
    else if (stage == "evaluate")
      saralert::run_evaluate(cfg);
    else
      saralert::run_pipeline(cfg);
  } catch (const saralert::ConfigError& e) {
    print_error(stage, "config", e.what());
    return kExitUsage;
  } catch (const saralert::DataError& e) {
    print_error(stage, "data", e.what());
    return kExitData;
  } catch (const saralert::IoError& e) {
    print_error(stage, "io", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    print_error(stage, "internal", e.what());
    return kExitInternal;
  }
  return 0;
}
