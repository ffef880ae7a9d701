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

#include "saralert/detection.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "saralert/stack_io.hpp"

namespace saralert {

std::optional<AlertRecord> detect(const TimeSeries& db_series,
                                  double threshold_db,
                                  const DetectOptions& options) {
  if (db_series.values.empty())
    throw DataError("detect: empty series");
  if (!std::isfinite(threshold_db))
    throw DataError("detect: threshold must be finite");
  if (options.confirmation < 1)
    throw ConfigError("detect: confirmation must be >= 1");

  std::vector<std::size_t> run;
  for (std::size_t i = 0; i < db_series.values.size(); ++i) {
    const double v = db_series.values[i];
    if (std::isnan(v)) {
      if (!options.skip_nodata) run.clear();
      continue;
    }
    if (v < threshold_db) {
      run.push_back(i);
      if (static_cast<int>(run.size()) == options.confirmation) {
        AlertRecord alert;
        alert.row = db_series.row;
        alert.col = db_series.col;
        alert.band = db_series.band;
        alert.first_breach_date = db_series.dates[run.front()];
        alert.confirmation_date = db_series.dates[run.back()];
        alert.alert_date = alert.first_breach_date;
        for (std::size_t j : run) alert.breach_values.push_back(db_series.values[j]);
        alert.threshold_db = threshold_db;
        return alert;
      }
    } else {
      run.clear();
    }
  }
  return std::nullopt;
}

StackDetection detect_stack(const RasterStack& db_stack,
                            const ForestModel& model,
                            const ThresholdSpec& threshold,
                            const SampleSet& samples,
                            const DetectOptions& options) {
  if (db_stack.unit != UnitDomain::kDb)
    throw DataError("detect_stack expects a dB stack");
  if (model.baseline_mean.width != db_stack.width ||
      model.baseline_mean.height != db_stack.height)
    throw DataError("model and stack are not co-registered");
  samples.bind_check(db_stack);

  // Monitoring excludes the calibration window (no self-comparison).
  const int monitor_start =
      db_stack.first_date_on_or_after(model.window.end.plus_days(1));

  StackDetection result;
  for (const auto& loc : samples.locations) {
    TimeSeries series = extract_series(db_stack, loc.row, loc.col, model.band);
    TimeSeries monitored;
    monitored.band = series.band;
    monitored.row = loc.row;
    monitored.col = loc.col;
    monitored.unit = series.unit;
    monitored.dates.assign(series.dates.begin() + monitor_start,
                           series.dates.end());
    monitored.values.assign(series.values.begin() + monitor_start,
                            series.values.end());
    const bool all_nodata =
        std::all_of(monitored.values.begin(), monitored.values.end(),
                    [](double v) { return std::isnan(v); });
    if (monitored.values.empty() || all_nodata) {
      result.unevaluable.push_back(loc);
      continue;
    }
    const double base = model.baseline_mean.at(loc.row, loc.col);
    if (std::isnan(base)) {
      result.unevaluable.push_back(loc);
      continue;
    }
    auto alert = detect(monitored, base + threshold.offset_db, options);
    if (alert) {
      alert->alpha = threshold.alpha;
      result.alerts.push_back(std::move(*alert));
    }
  }
  return result;
}

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kTruePositive:
      return "tp";
    case Outcome::kFalseNegative:
      return "fn";
    case Outcome::kFalsePositive:
      return "fp";
    case Outcome::kTrueNegative:
      return "tn";
    case Outcome::kUnevaluable:
      return "unevaluable";
  }
  return "?";
}

EvaluationReport evaluate(const std::vector<AlertRecord>& alerts,
                          const SampleSet& samples,
                          const std::vector<SampleLocation>& unevaluable) {
  std::map<std::pair<int, int>, const AlertRecord*> alert_at;
  for (const auto& a : alerts) alert_at[{a.row, a.col}] = &a;

  std::map<std::pair<int, int>, const SampleLocation*> sample_at;
  for (const auto& l : samples.locations) sample_at[{l.row, l.col}] = &l;
  for (const auto& a : alerts) {
    if (!sample_at.count({a.row, a.col}))
      throw DataError("alert at (" + std::to_string(a.row) + "," +
                      std::to_string(a.col) +
                      ") has no matching sample location");
  }

  std::map<std::pair<int, int>, bool> skip;
  for (const auto& l : unevaluable) skip[{l.row, l.col}] = true;

  EvaluationReport report;
  std::vector<std::int64_t> delays;
  for (const auto& loc : samples.locations) {
    LocationOutcome lo;
    lo.location = loc;
    if (skip.count({loc.row, loc.col})) {
      lo.outcome = Outcome::kUnevaluable;
      ++report.unevaluable;
      report.outcomes.push_back(std::move(lo));
      continue;
    }
    auto it = alert_at.find({loc.row, loc.col});
    const AlertRecord* alert = it == alert_at.end() ? nullptr : it->second;
    if (loc.cls == SampleClass::kClearedForest) {
      if (alert) {
        lo.outcome = Outcome::kTruePositive;
        lo.alert_date = alert->alert_date;
        lo.delay_days = alert->alert_date - *loc.reference_date;
        delays.push_back(*lo.delay_days);
        ++report.tp;
      } else {
        lo.outcome = Outcome::kFalseNegative;
        ++report.fn;
      }
    } else {
      if (alert) {
        lo.outcome = Outcome::kFalsePositive;
        lo.alert_date = alert->alert_date;
        ++report.fp;
      } else {
        lo.outcome = Outcome::kTrueNegative;
        ++report.tn;
      }
    }
    report.outcomes.push_back(std::move(lo));
  }

  report.commission_error =
      report.tp + report.fp > 0
          ? static_cast<double>(report.fp) / (report.tp + report.fp)
          : 0.0;
  report.omission_error =
      report.tp + report.fn > 0
          ? static_cast<double>(report.fn) / (report.tp + report.fn)
          : 0.0;
  if (!delays.empty()) {
    std::sort(delays.begin(), delays.end());
    const std::size_t mid = delays.size() / 2;
    if (delays.size() % 2 == 1) {
      report.median_delay_days = delays[mid];
    } else {
      // Even count: floor of the midpoint keeps the field integral.
      const std::int64_t lo = delays[mid - 1], hi = delays[mid];
      report.median_delay_days =
          static_cast<std::int64_t>(std::floor((lo + hi) / 2.0));
    }
  }
  return report;
}

}  // namespace saralert
