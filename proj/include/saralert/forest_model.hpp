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

#ifndef SARALERT_FOREST_MODEL_HPP_
#define SARALERT_FOREST_MODEL_HPP_

#include <filesystem>

#include "saralert/stack.hpp"

namespace saralert {

/// Closed date interval [start, end] used for baseline calibration.
struct DateInterval {
  Date start;
  Date end;

  bool contains(Date d) const { return start <= d && d <= end; }
};

/// Baseline statistics of filtered forest backscatter in dB: per-pixel
/// temporal mean plus one pooled standard deviation per band (the sampled
/// forest distributions share their variance, so pooling is sound and a
/// per-pixel sigma would rest on too few dates).
struct ForestModel {
  Grid baseline_mean;         // dB; NaN where the window had no valid data
  double pooled_sigma = 0.0;  // dB
  DateInterval window;
  std::string band;
};

struct ThresholdSpec {
  double alpha = 0.0;
  double z_crit = 0.0;     // Phi^-1(alpha), negative for alpha < 0.5
  double offset_db = 0.0;  // z_crit * pooled_sigma
  std::string band;
};

inline constexpr int kMinCalibrationDates = 8;

/// Default rule: the earliest two years of the stack, additionally ending
/// the day before the earliest cleared-forest reference date when one is
/// supplied, so no post-event observation contaminates the baseline.
DateInterval default_calibration_window(const RasterStack& stack,
                                        const SampleSet* cleared = nullptr);

/// Fits the per-pixel baseline mean and the pooled sigma over the forest
/// locations. The stack must be in dB (filtered upstream). Throws
/// DataError when the window holds fewer than kMinCalibrationDates dates
/// or every location is degenerate.
ForestModel fit_baseline(const RasterStack& db_stack,
                         const DateInterval& window, const SampleSet& forest,
                         const std::string& band);

/// One-sided z-test threshold: detection compares observations against
/// baseline_mean(x, y) + offset_db.
ThresholdSpec derive_threshold(const ForestModel& model, double alpha);

// Model directory: baseline.raw (float32, stack raster format) +
// model.json (pooled_sigma, window, band, extent).
void save_model(const ForestModel& model, const std::filesystem::path& dir);
ForestModel load_model(const std::filesystem::path& dir);

}  // namespace saralert

#endif  // SARALERT_FOREST_MODEL_HPP_
