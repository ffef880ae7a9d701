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

#include <cmath>

#include "bench_scene.hpp"
#include "oracle_helpers.hpp"
#include "saralert/quality.hpp"
#include "saralert/synth.hpp"

using namespace saralert;

TEST_CASE("enl hand cases") {
  const std::vector<double> two{1.0, 3.0};  // mean 2, variance 2
  CHECK(enl(two) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(enl(std::vector<double>{5.0, 5.0, 5.0}), DataError);
  CHECK_THROWS_AS(enl(std::vector<double>{1.0}), DataError);
}

TEST_CASE("enl of gamma speckle recovers the look count") {
  SplitMix64 rng(derive_stream(100, {1}));
  std::vector<double> draws(100000);
  for (auto& v : draws) v = rng.next_gamma(4.0) / 4.0;
  CHECK(enl(draws) > 3.8);
  CHECK(enl(draws) < 4.2);
}

TEST_CASE("enl is scale-free") {
  SplitMix64 rng(derive_stream(101, {2}));
  std::vector<double> draws(4000);
  for (auto& v : draws) v = rng.next_gamma(5.0);
  const double base = enl(draws);
  for (double k : {0.001, 3.0, 1e4}) {
    auto scaled = draws;
    for (auto& v : scaled) v *= k;
    CHECK(enl(scaled) == doctest::Approx(base).epsilon(1e-9));
  }
}

namespace {

TimeSeries series_of(std::vector<double> values) {
  TimeSeries ts;
  ts.values = std::move(values);
  ts.dates = regular_dates(Date::parse("2020-01-01"),
                           static_cast<int>(ts.values.size()), 12);
  ts.band = "VV";
  ts.unit = UnitDomain::kLinearPower;
  return ts;
}

}  // namespace

TEST_CASE("range_index hand cases") {
  CHECK(range_index(series_of({0.4, 0.4, 0.4, 0.4})) == 0.0);

  // 11 values: the 10th/90th percentile ranks land exactly on order
  // statistics 1 and 9, placed so that P90 = 10 * P10.
  CHECK(range_index(series_of({0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8,
                               1.0, 2.0})) ==
        doctest::Approx(10.0).epsilon(1e-12));

  CHECK_THROWS_AS(range_index(series_of({0.0, 1.0})), DataError);
  CHECK_THROWS_AS(range_index(series_of({0.5})), DataError);
  TimeSeries db = series_of({0.1, 1.0});
  db.unit = UnitDomain::kDb;
  CHECK_THROWS_AS(range_index(db), DataError);
}

TEST_CASE("range_index matches the sort-and-interpolate oracle") {
  SplitMix64 rng(derive_stream(102, {3}));
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> vals(7 + trial * 3);
    for (auto& v : vals) v = 0.01 + rng.next_unit();
    const double expected = 10.0 * std::log10(
        oracle::percentile_oracle(vals, 90.0) /
        oracle::percentile_oracle(vals, 10.0));
    CHECK(range_index(series_of(vals)) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("range_index invariances") {
  SplitMix64 rng(derive_stream(103, {4}));
  // n = 41: the percentile ranks 0.1*(n-1) and 0.9*(n-1) are integers, so
  // P10/P90 are order statistics and inversion maps them onto each other
  // exactly (with interpolated ranks the symmetry only holds
  // approximately).
  std::vector<double> vals(41);
  for (auto& v : vals) v = 0.05 + rng.next_unit();
  const double base = range_index(series_of(vals));
  SUBCASE("scale invariance") {
    auto scaled = vals;
    for (auto& v : scaled) v *= 37.5;
    CHECK(range_index(series_of(scaled)) ==
          doctest::Approx(base).epsilon(1e-10));
  }
  SUBCASE("inversion symmetry: range(1/x) = range(x)") {
    auto inverted = vals;
    for (auto& v : inverted) v = 1.0 / v;
    CHECK(range_index(series_of(inverted)) ==
          doctest::Approx(base).epsilon(1e-10));
  }
  SUBCASE("NaN values are dropped as no-data") {
    auto holed = vals;
    holed.push_back(oracle::kNan);
    CHECK(range_index(series_of(holed)) == doctest::Approx(base).epsilon(1e-10));
  }
}

TEST_CASE("normalize_scores") {
  CHECK(normalize_scores({2.0, 4.0, 6.0}) ==
        std::vector<double>{0.0, 0.5, 1.0});
  CHECK(normalize_scores({7.0, 7.0, 7.0}) ==
        std::vector<double>{0.5, 0.5, 0.5});
  CHECK_THROWS_AS(normalize_scores({}), DataError);

  SplitMix64 rng(derive_stream(104, {5}));
  std::vector<double> raw(31);
  for (auto& v : raw) v = rng.next_unit() * 100.0 - 20.0;
  const auto norm = normalize_scores(raw);
  CHECK(*std::min_element(norm.begin(), norm.end()) == 0.0);
  CHECK(*std::max_element(norm.begin(), norm.end()) == 1.0);
  for (std::size_t i = 0; i + 1 < raw.size(); ++i)
    for (std::size_t j = i + 1; j < raw.size(); ++j)
      CHECK((raw[i] < raw[j]) == (norm[i] < norm[j]));
}

namespace {

SceneResult small_scene(std::uint64_t seed) {
  SceneConfig cfg;
  cfg.width = 72;
  cfg.height = 72;
  cfg.dates = regular_dates(Date::parse("2020-01-01"), 10, 12);
  cfg.forest_mean_db = {-7.0};
  cfg.forest_sigma_db = {0.0};
  cfg.looks = 5.0;
  cfg.seed = seed;
  cfg.events.push_back({44, 44, 20, 20, cfg.dates[5], 3.0});
  cfg.forest_samples = 10;
  cfg.cleared_samples = 10;
  cfg.sample_margin = 8;
  cfg.cleared_inset = 3;
  return generate_scene(cfg);
}

const CombinationScore& find_score(const std::vector<CombinationScore>& all,
                                   const std::string& name) {
  for (const auto& s : all)
    if (s.combo.name() == name) return s;
  throw std::runtime_error("combo missing: " + name);
}

}  // namespace

TEST_CASE("a single combination scores the degenerate 0.5") {
  const SceneResult scene = small_scene(200);
  const auto scores = score_combinations(
      scene.stack, scene.forest, scene.cleared,
      {FilterCombination::parse("median9+frost9")}, "VV");
  REQUIRE(scores.size() == 1);
  CHECK(scores[0].normalized_enl == 0.5);
  CHECK(scores[0].normalized_range == 0.5);
  CHECK(scores[0].score == 0.5);
}

TEST_CASE("scores are invariant under global scaling of the stack") {
  const SceneResult scene = small_scene(201);
  const std::vector<FilterCombination> combos = {
      FilterCombination::parse("none+none"),
      FilterCombination::parse("none+median9"),
      FilterCombination::parse("median9+frost9")};
  const auto base = score_combinations(scene.stack, scene.forest,
                                       scene.cleared, combos, "VV");
  RasterStack scaled = scene.stack;
  for (auto& v : scaled.pixels) v *= 4.0;
  const auto after = score_combinations(scaled, scene.forest, scene.cleared,
                                        combos, "VV");
  REQUIRE(base.size() == after.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(base[i].combo.name() == after[i].combo.name());
    CHECK(base[i].score == doctest::Approx(after[i].score).epsilon(1e-9));
  }
}

TEST_CASE("the multitemporal combination outranks the no-temporal column") {
  const bench::BenchScene scene = bench::make_bench_scene(202);
  const std::vector<FilterCombination> combos = {
      FilterCombination::parse("none+none"),
      FilterCombination::parse("none+frost9"),
      FilterCombination::parse("none+median9"),
      FilterCombination::parse("median9+frost9")};
  const auto scores = score_combinations(scene.stack, scene.forest,
                                         scene.cleared, combos, "VV");
  const auto& winner = find_score(scores, "median9+frost9");
  CHECK(winner.mean_enl > find_score(scores, "none+none").mean_enl);
  for (const char* rival : {"none+none", "none+frost9", "none+median9"}) {
    INFO(rival);
    CHECK(winner.score > find_score(scores, rival).score);
  }
}
