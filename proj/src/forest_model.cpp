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

#include "saralert/forest_model.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "saralert/parallel.hpp"
#include "saralert/stack_io.hpp"
#include "saralert/stats.hpp"

namespace saralert {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr std::int64_t kTwoYearsDays = 730;
}  // namespace

DateInterval default_calibration_window(const RasterStack& stack,
                                        const SampleSet* cleared) {
  if (stack.dates.empty()) throw DataError("stack has no dates");
  Date start = stack.dates.front();
  Date end = start.plus_days(kTwoYearsDays);
  if (cleared) {
    for (const auto& loc : cleared->locations) {
      if (loc.reference_date && loc.reference_date->plus_days(-1) < end)
        end = loc.reference_date->plus_days(-1);
    }
  }
  if (stack.dates.back() < end) end = stack.dates.back();
  return {start, end};
}

ForestModel fit_baseline(const RasterStack& db_stack,
                         const DateInterval& window, const SampleSet& forest,
                         const std::string& band) {
  if (db_stack.unit != UnitDomain::kDb)
    throw DataError("fit_baseline expects a dB stack");
  const int b = db_stack.band_index(band);
  if (b < 0) throw DataError("unknown band '" + band + "'");
  const auto forest_locs = forest.of_class(SampleClass::kInvariantForest);
  if (forest_locs.empty())
    throw DataError("fit_baseline needs a non-empty forest sample set");
  forest.bind_check(db_stack);

  std::vector<int> date_idx;
  for (std::size_t d = 0; d < db_stack.dates.size(); ++d)
    if (window.contains(db_stack.dates[d])) date_idx.push_back(static_cast<int>(d));
  if (static_cast<int>(date_idx.size()) < kMinCalibrationDates)
    throw DataError("calibration window holds " +
                    std::to_string(date_idx.size()) + " dates; need at least " +
                    std::to_string(kMinCalibrationDates));

  ForestModel model;
  model.window = window;
  model.band = band;
  model.baseline_mean = Grid(db_stack.width, db_stack.height);

  const std::size_t npx = db_stack.slice_size();
  parallel_chunks(npx, [&](std::size_t p0, std::size_t p1) {
    for (std::size_t p = p0; p < p1; ++p) {
      double sum = 0.0;
      int count = 0;
      for (int d : date_idx) {
        const double v = db_stack.slice(d, b)[p];
        if (!std::isnan(v)) {
          sum += v;
          ++count;
        }
      }
      model.baseline_mean.data[p] = count > 0 ? sum / count : kNan;
    }
  });

  // Pooled sigma: mean of per-location unbiased variances over the forest
  // locations, then square root.
  double var_sum = 0.0;
  int var_count = 0;
  for (const auto& loc : forest_locs) {
    const std::size_t p = static_cast<std::size_t>(loc.row) * db_stack.width +
                          loc.col;
    double sum = 0.0;
    int count = 0;
    for (int d : date_idx) {
      const double v = db_stack.slice(d, b)[p];
      if (!std::isnan(v)) {
        sum += v;
        ++count;
      }
    }
    if (count < 2) continue;
    const double mean = sum / count;
    double ss = 0.0;
    for (int d : date_idx) {
      const double v = db_stack.slice(d, b)[p];
      if (!std::isnan(v)) ss += (v - mean) * (v - mean);
    }
    var_sum += ss / (count - 1);
    ++var_count;
  }
  if (var_count == 0)
    throw DataError("no forest location had enough valid dates to estimate "
                    "variance");
  const double pooled_var = var_sum / var_count;
  if (!(pooled_var > 0.0))
    throw DataError("pooled forest variance is zero; cannot model a "
                    "time-constant stack");
  model.pooled_sigma = std::sqrt(pooled_var);
  return model;
}

ThresholdSpec derive_threshold(const ForestModel& model, double alpha) {
  if (!(model.pooled_sigma > 0.0))
    throw DataError("model has non-positive pooled sigma");
  ThresholdSpec spec;
  spec.alpha = alpha;
  spec.z_crit = z_quantile(alpha);
  spec.offset_db = spec.z_crit * model.pooled_sigma;
  spec.band = model.band;
  return spec;
}

void save_model(const ForestModel& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_raster(model.baseline_mean, dir / "baseline.raw");
  nlohmann::ordered_json j;
  j["width"] = model.baseline_mean.width;
  j["height"] = model.baseline_mean.height;
  j["band"] = model.band;
  j["pooled_sigma"] = model.pooled_sigma;
  j["window_start"] = model.window.start.to_string();
  j["window_end"] = model.window.end.to_string();
  std::ofstream out(dir / "model.json", std::ios::trunc);
  if (!out) throw IoError("cannot write " + (dir / "model.json").string());
  out << j.dump(2) << "\n";
}

ForestModel load_model(const std::filesystem::path& dir) {
  std::ifstream in(dir / "model.json");
  if (!in) throw IoError("cannot open " + (dir / "model.json").string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed model.json: " + std::string(e.what()));
  }
  ForestModel model;
  const int w = j.at("width").get<int>();
  const int h = j.at("height").get<int>();
  model.band = j.at("band").get<std::string>();
  model.pooled_sigma = j.at("pooled_sigma").get<double>();
  model.window.start = Date::parse(j.at("window_start").get<std::string>());
  model.window.end = Date::parse(j.at("window_end").get<std::string>());
  model.baseline_mean = load_raster(dir / "baseline.raw", w, h);
  if (!(model.pooled_sigma > 0.0))
    throw DataError("model.json: pooled_sigma must be positive");
  return model;
}

}  // namespace saralert
