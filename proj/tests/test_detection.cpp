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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "saralert/calibration.hpp"
#include "saralert/detection.hpp"
#include "saralert/synth.hpp"

using namespace saralert;

namespace {

TimeSeries db_series(std::vector<double> values) {
  TimeSeries ts;
  ts.values = std::move(values);
  ts.dates = regular_dates(Date::parse("2021-01-01"),
                           static_cast<int>(ts.values.size()), 12);
  ts.band = "VV";
  ts.unit = UnitDomain::kDb;
  return ts;
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

TEST_CASE("detect: confirmed-alert rule") {
  SUBCASE("all values above threshold: no alert") {
    CHECK_FALSE(detect(db_series({-0.1, -0.2, -0.3}), -1.0).has_value());
  }
  SUBCASE("a single isolated breach stays unconfirmed") {
    CHECK_FALSE(
        detect(db_series({-0.1, -1.5, -0.2, -0.3, -0.1}), -1.0).has_value());
  }
  SUBCASE("two consecutive breaches confirm; dates recorded") {
    const TimeSeries ts = db_series({-0.1, -0.5, -1.4, -1.6});
    const auto alert = detect(ts, -1.0);
    REQUIRE(alert.has_value());
    CHECK(alert->first_breach_date == ts.dates[2]);
    CHECK(alert->confirmation_date == ts.dates[3]);
    CHECK(alert->alert_date == ts.dates[2]);
    REQUIRE(alert->breach_values.size() == 2);
    CHECK(alert->breach_values[0] == -1.4);
    CHECK(alert->breach_values[1] == -1.6);
    CHECK(alert->breach_values[0] < alert->threshold_db);
    CHECK(alert->breach_values[1] < alert->threshold_db);
  }
  SUBCASE("equality is not a breach") {
    CHECK_FALSE(detect(db_series({-1.0, -1.0, -1.0}), -1.0).has_value());
  }
  SUBCASE("confirmation = 1 alerts on the first breach") {
    const auto alert = detect(db_series({-0.1, -1.5, -0.2}), -1.0,
                              DetectOptions{1, false});
    REQUIRE(alert.has_value());
    CHECK(alert->alert_date == Date::parse("2021-01-13"));
  }
  SUBCASE("no-data resets the run by default") {
    const auto reset =
        detect(db_series({-1.5, kNan, -1.6, -0.1}), -1.0);
    CHECK_FALSE(reset.has_value());
    const auto skipped = detect(db_series({-1.5, kNan, -1.6, -0.1}), -1.0,
                                DetectOptions{2, true});
    REQUIRE(skipped.has_value());
    CHECK(skipped->first_breach_date == Date::parse("2021-01-01"));
    CHECK(skipped->confirmation_date == Date::parse("2021-01-25"));
  }
  SUBCASE("invariant under adding a constant to series and threshold") {
    const std::vector<double> vals{-0.1, -0.5, -1.4, -1.6, -0.2, -1.7};
    const auto base = detect(db_series(vals), -1.0);
    std::vector<double> shifted = vals;
    for (auto& v : shifted) v += 6.25;
    const auto after = detect(db_series(shifted), -1.0 + 6.25);
    REQUIRE(base.has_value());
    REQUIRE(after.has_value());
    CHECK(base->alert_date == after->alert_date);
    CHECK(base->confirmation_date == after->confirmation_date);
  }
  SUBCASE("bad inputs") {
    CHECK_THROWS_AS(detect(db_series({}), -1.0), DataError);
    CHECK_THROWS_AS(detect(db_series({-1.0}), kNan), DataError);
    CHECK_THROWS_AS(detect(db_series({-1.0}), -1.0, DetectOptions{0, false}),
                    ConfigError);
  }
}

namespace {

struct DetectionFixture {
  RasterStack db;
  ForestModel model;
  SampleSet samples;
  Date event_date;
};

/// 40-date scene, 3 dB drop at date index 28 inside one big rectangle;
/// baseline fitted on the first 24 dates. High looks so the dB series is
/// essentially N(-7, 0.5^2).
DetectionFixture make_fixture(std::uint64_t seed, int cleared_count = 60,
                              int forest_count = 30) {
  SceneConfig cfg;
  cfg.width = 80;
  cfg.height = 80;
  cfg.dates = regular_dates(Date::parse("2019-01-01"), 40, 12);
  cfg.forest_mean_db = {-7.0};
  cfg.forest_sigma_db = {0.5};
  cfg.looks = 1e6;
  cfg.seed = seed;
  cfg.events.push_back({10, 10, 30, 30, cfg.dates[28], 3.0});
  cfg.forest_samples = forest_count;
  cfg.cleared_samples = cleared_count;
  cfg.sample_margin = 6;
  const SceneResult scene = generate_scene(cfg);

  DetectionFixture fx;
  fx.db = db_convert(scene.stack, DbDirection::kToDb);
  SampleSet forest = scene.forest;
  fx.samples = forest;
  fx.samples.append(scene.cleared);
  fx.event_date = cfg.dates[28];
  // The default rule caps calibration the day before the earliest cleared
  // reference date, so monitoring starts at the event date. Forest-only
  // fixtures get an explicit 24-date window instead.
  const DateInterval window =
      scene.cleared.locations.empty()
          ? DateInterval{cfg.dates.front(), cfg.dates[23]}
          : default_calibration_window(fx.db, &scene.cleared);
  fx.model = fit_baseline(fx.db, window, forest, "VV");
  return fx;
}

std::set<std::pair<int, int>> alert_locations(
    const std::vector<AlertRecord>& alerts) {
  std::set<std::pair<int, int>> locs;
  for (const auto& a : alerts) locs.insert({a.row, a.col});
  return locs;
}

}  // namespace

TEST_CASE("detect_stack finds the synthetic clearcut and spares the forest") {
  const DetectionFixture fx = make_fixture(8101);
  const ThresholdSpec spec = derive_threshold(fx.model, 0.05);
  const StackDetection det =
      detect_stack(fx.db, fx.model, spec, fx.samples, DetectOptions{2, false});
  CHECK(det.unevaluable.empty());

  const EvaluationReport report = evaluate(det.alerts, fx.samples);
  CHECK(report.tp >= 57);  // 3 dB drop vs 0.5 dB sigma: near-certain
  CHECK(report.omission_error <= 0.05);
  CHECK(report.commission_error <= 0.05);

  // Alert at or after the event date for >= 95% of cleared locations; a
  // pre-event noise breach confirmed by the event itself legitimately
  // produces a slightly earlier alert date.
  int cleared_total = 0, on_time = 0;
  for (const auto& a : det.alerts) {
    const auto& loc = *std::find_if(
        fx.samples.locations.begin(), fx.samples.locations.end(),
        [&](const SampleLocation& l) {
          return l.row == a.row && l.col == a.col;
        });
    if (loc.cls == SampleClass::kClearedForest) {
      ++cleared_total;
      on_time += a.alert_date.days() >= fx.event_date.days();
      CHECK(a.alert_date.days() >=
            fx.event_date.days() - 12);  // at worst one interval early
    }
  }
  CHECK(on_time * 100 >= cleared_total * 95);
}

TEST_CASE("empty sample set yields no alerts") {
  const DetectionFixture fx = make_fixture(8102, 10, 5);
  const ThresholdSpec spec = derive_threshold(fx.model, 0.05);
  const StackDetection det =
      detect_stack(fx.db, fx.model, spec, SampleSet{}, DetectOptions{});
  CHECK(det.alerts.empty());
  CHECK(det.unevaluable.empty());
}

TEST_CASE("alert sets are monotone in alpha and confirmation") {
  const DetectionFixture fx = make_fixture(8103);
  const auto at = [&](double alpha, int confirmation) {
    const ThresholdSpec spec = derive_threshold(fx.model, alpha);
    return alert_locations(detect_stack(fx.db, fx.model, spec, fx.samples,
                                        DetectOptions{confirmation, false})
                               .alerts);
  };
  const auto a1 = at(0.01, 2);
  const auto a5 = at(0.05, 2);
  for (const auto& loc : a1) CHECK(a5.count(loc) == 1);

  const auto c3 = at(0.05, 3);
  for (const auto& loc : c3) CHECK(a5.count(loc) == 1);
}

TEST_CASE("all-no-data locations are unevaluable and excluded") {
  DetectionFixture fx = make_fixture(8104, 10, 5);
  const auto& loc = fx.samples.locations.front();
  for (std::size_t d = 0; d < fx.db.dates.size(); ++d)
    fx.db.slice(static_cast<int>(d), 0)
        [static_cast<std::size_t>(loc.row) * fx.db.width + loc.col] =
        std::numeric_limits<double>::quiet_NaN();
  const ThresholdSpec spec = derive_threshold(fx.model, 0.05);
  const StackDetection det =
      detect_stack(fx.db, fx.model, spec, fx.samples, DetectOptions{});
  REQUIRE(det.unevaluable.size() == 1);
  CHECK(det.unevaluable[0].row == loc.row);

  const EvaluationReport report =
      evaluate(det.alerts, fx.samples, det.unevaluable);
  CHECK(report.unevaluable == 1);
  CHECK(report.tp + report.fp + report.fn + report.tn + report.unevaluable ==
        static_cast<int>(fx.samples.locations.size()));
}

TEST_CASE("evaluate hand-count example") {
  // 10 cleared (8 alerted), 5 forest (2 alerted).
  SampleSet samples;
  std::vector<AlertRecord> alerts;
  const Date ref = Date::parse("2020-06-01");
  for (int i = 0; i < 10; ++i) {
    samples.locations.push_back({i, 0, SampleClass::kClearedForest, ref});
    if (i < 8) {
      AlertRecord a;
      a.row = i;
      a.col = 0;
      a.band = "VV";
      a.alert_date = ref.plus_days(12 * (i % 3));
      a.first_breach_date = a.alert_date;
      a.confirmation_date = a.alert_date.plus_days(12);
      alerts.push_back(a);
    }
  }
  for (int i = 0; i < 5; ++i) {
    samples.locations.push_back({i, 1, SampleClass::kInvariantForest,
                                 std::nullopt});
    if (i < 2) {
      AlertRecord a;
      a.row = i;
      a.col = 1;
      a.band = "VV";
      a.alert_date = ref;
      a.first_breach_date = ref;
      a.confirmation_date = ref.plus_days(12);
      alerts.push_back(a);
    }
  }
  const EvaluationReport report = evaluate(alerts, samples);
  CHECK(report.tp == 8);
  CHECK(report.fn == 2);
  CHECK(report.fp == 2);
  CHECK(report.tn == 3);
  CHECK(report.commission_error == doctest::Approx(0.2));
  CHECK(report.omission_error == doctest::Approx(0.2));
  // CE = 1 - UA and OE = 1 - PA identities.
  const double ua = static_cast<double>(report.tp) / (report.tp + report.fp);
  const double pa = static_cast<double>(report.tp) / (report.tp + report.fn);
  CHECK(report.commission_error == doctest::Approx(1.0 - ua).epsilon(1e-12));
  CHECK(report.omission_error == doctest::Approx(1.0 - pa).epsilon(1e-12));
  CHECK(report.median_delay_days == 12);
}

TEST_CASE("evaluate edge cases") {
  SUBCASE("perfect detection") {
    SampleSet samples;
    std::vector<AlertRecord> alerts;
    const Date ref = Date::parse("2020-06-01");
    for (int i = 0; i < 4; ++i) {
      samples.locations.push_back({i, 0, SampleClass::kClearedForest, ref});
      AlertRecord a;
      a.row = i;
      a.col = 0;
      a.alert_date = ref.plus_days(-12);  // radar alert precedes optical
      alerts.push_back(a);
    }
    samples.locations.push_back({9, 9, SampleClass::kInvariantForest,
                                 std::nullopt});
    const EvaluationReport r = evaluate(alerts, samples);
    CHECK(r.commission_error == 0.0);
    CHECK(r.omission_error == 0.0);
    CHECK(r.median_delay_days == -12);  // negative: alert came first
  }
  SUBCASE("no alerts at all") {
    SampleSet samples;
    samples.locations.push_back({0, 0, SampleClass::kInvariantForest,
                                 std::nullopt});
    const EvaluationReport r = evaluate({}, samples);
    CHECK(r.commission_error == 0.0);
  }
  SUBCASE("alert at an unknown location throws") {
    SampleSet samples;
    samples.locations.push_back({0, 0, SampleClass::kInvariantForest,
                                 std::nullopt});
    AlertRecord a;
    a.row = 5;
    a.col = 5;
    CHECK_THROWS_AS(evaluate({a}, samples), DataError);
  }
}

TEST_CASE("with confirmation 1 the alert frequency tracks alpha") {
  // Ties the detector to the threshold calibration: on stationary forest
  // the chance that a location alerts during M monitoring dates is
  // 1 - (1 - alpha)^M.
  const DetectionFixture fx = make_fixture(8105, 0, 400);
  const double alpha = 0.05;
  const ThresholdSpec spec = derive_threshold(fx.model, alpha);
  const StackDetection det = detect_stack(fx.db, fx.model, spec, fx.samples,
                                          DetectOptions{1, false});
  const double m = 16.0;  // monitoring dates
  const double expect = 1.0 - std::pow(1.0 - alpha, m);
  const double got =
      static_cast<double>(det.alerts.size()) / fx.samples.locations.size();
  CHECK(std::fabs(got - expect) < 0.08);
}
