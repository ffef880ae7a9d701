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

#ifndef SARALERT_DETECTION_HPP_
#define SARALERT_DETECTION_HPP_

#include <optional>

#include "saralert/forest_model.hpp"
#include "saralert/stack.hpp"

namespace saralert {

struct DetectOptions {
  /// Consecutive breaches required to confirm an alert.
  int confirmation = 2;
  /// When false (default) a no-data observation resets the breach run;
  /// when true it is skipped without breaking adjacency.
  bool skip_nodata = false;
};

/// A confirmed detection at one location. alert_date is the first breach
/// of the confirming run (earliest evidence); confirmation_date is the
/// observation that completed the run.
struct AlertRecord {
  int row = 0;
  int col = 0;
  std::string band;
  Date first_breach_date;
  Date confirmation_date;
  Date alert_date;
  std::vector<double> breach_values;  // dB, the confirming run
  double threshold_db = 0.0;
  double alpha = 0.0;
};

/// Scans the dB series in date order for the first run of
/// options.confirmation values strictly below the threshold. Equality is
/// not a breach. Returns nothing when no run confirms.
std::optional<AlertRecord> detect(const TimeSeries& db_series,
                                  double threshold_db,
                                  const DetectOptions& options = {});

struct StackDetection {
  std::vector<AlertRecord> alerts;
  std::vector<SampleLocation> unevaluable;  // all-no-data monitoring series
};

/// Runs detect at every sample location with the per-pixel threshold
/// baseline_mean(x, y) + offset_db. Monitoring starts at the first date
/// after the model's calibration window.
StackDetection detect_stack(const RasterStack& db_stack,
                            const ForestModel& model,
                            const ThresholdSpec& threshold,
                            const SampleSet& samples,
                            const DetectOptions& options = {});

enum class Outcome {
  kTruePositive,
  kFalseNegative,
  kFalsePositive,
  kTrueNegative,
  kUnevaluable
};

std::string outcome_name(Outcome o);

struct LocationOutcome {
  SampleLocation location;
  Outcome outcome = Outcome::kTrueNegative;
  std::optional<Date> alert_date;
  std::optional<std::int64_t> delay_days;  // alert - reference, TPs only
};

/// Classification performance against the sample classes. An alert at a
/// cleared location is a true positive regardless of the sign of its
/// delay; the delay distribution is reported instead (the optical
/// reference often trails the radar signal).
struct EvaluationReport {
  double commission_error = 0.0;  // fp / (tp + fp), 0 when no alerts
  double omission_error = 0.0;    // fn / (tp + fn)
  std::int64_t median_delay_days = 0;  // over true positives
  int tp = 0, fp = 0, fn = 0, tn = 0;
  int unevaluable = 0;
  std::vector<LocationOutcome> outcomes;
};

/// Every alert location must appear in samples (DataError otherwise).
/// Locations listed in unevaluable are excluded from the denominators.
EvaluationReport evaluate(
    const std::vector<AlertRecord>& alerts, const SampleSet& samples,
    const std::vector<SampleLocation>& unevaluable = {});

}  // namespace saralert

#endif  // SARALERT_DETECTION_HPP_
