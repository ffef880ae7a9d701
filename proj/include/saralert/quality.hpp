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

#ifndef SARALERT_QUALITY_HPP_
#define SARALERT_QUALITY_HPP_

#include <filesystem>
#include <span>

#include "saralert/filters.hpp"
#include "saralert/stack.hpp"

namespace saralert {

/// Equivalent number of looks: mean^2 / unbiased sample variance of a
/// homogeneous linear-power sample. Throws DataError for n < 2 or a
/// degenerate (zero-variance) sample.
double enl(std::span<const double> values);

/// Percentile by linear interpolation between order statistics at rank
/// p/100 * (n-1). values must be sorted ascending.
double percentile_linear(std::span<const double> sorted_values, double p);

/// Preserved-contrast index of a despeckled time series (TCR variant):
/// 10*log10(P90 / P10) of the value distribution, in dB. Input must be
/// linear power; NaN values are dropped as no-data.
double range_index(const TimeSeries& series);

/// Min-max scaling to [0,1]; an all-equal input maps to all 0.5 so the
/// combined score stays interpretable.
std::vector<double> normalize_scores(const std::vector<double>& raw);

struct CombinationScore {
  FilterCombination combo;
  double mean_enl = 0.0;       // over invariant-forest locations
  double mean_range_db = 0.0;  // over cleared-forest locations
  double normalized_enl = 0.0;
  double normalized_range = 0.0;
  double score = 0.0;
  int enl_locations = 0;    // locations that evaluated successfully
  int range_locations = 0;
  bool scored = true;  // false when > 50% of either sample set failed
};

struct ScoreOptions {
  int enl_window = 7;  // per-location sampling window, pooled across dates
};

/// Filters the stack once per combination, computes mean ENL over the
/// forest locations and mean Range over the cleared locations, min-max
/// normalizes each index across the scored combinations and ranks by the
/// mean of the two. Ties break lexicographically on combination name.
std::vector<CombinationScore> score_combinations(
    const RasterStack& stack, const SampleSet& forest,
    const SampleSet& cleared, const std::vector<FilterCombination>& combos,
    const std::string& band, const ScoreOptions& options = {});

/// CSV: combo,mean_enl,mean_range,norm_enl,norm_range,score
void write_scores_csv(const std::vector<CombinationScore>& scores,
                      const std::filesystem::path& csv);

}  // namespace saralert

#endif  // SARALERT_QUALITY_HPP_
