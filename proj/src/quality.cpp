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

#include "saralert/quality.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "saralert/stack_io.hpp"
#include "saralert/util.hpp"

namespace saralert {

double enl(std::span<const double> values) {
  if (values.size() < 2)
    throw DataError("ENL needs at least 2 values, got " +
                    std::to_string(values.size()));
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(values.size() - 1);
  if (!(var > 0.0))
    throw DataError("degenerate homogeneous sample (zero variance)");
  return mean * mean / var;
}

double percentile_linear(std::span<const double> sorted_values, double p) {
  const std::size_t n = sorted_values.size();
  if (n == 0) throw DataError("percentile of empty sample");
  if (n == 1) return sorted_values[0];
  const double rank = std::clamp(p, 0.0, 100.0) / 100.0 *
                      static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(rank);
  if (lo + 1 >= n) return sorted_values[n - 1];
  const double frac = rank - static_cast<double>(lo);
  return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

double range_index(const TimeSeries& series) {
  if (series.unit != UnitDomain::kLinearPower)
    throw DataError("range_index expects linear-power values");
  std::vector<double> vals;
  vals.reserve(series.values.size());
  for (double v : series.values) {
    if (std::isnan(v)) continue;
    if (!(v > 0.0))
      throw DataError("range_index requires positive values");
    vals.push_back(v);
  }
  if (vals.size() < 2)
    throw DataError("range_index needs at least 2 valid values");
  std::sort(vals.begin(), vals.end());
  const double p90 = percentile_linear(vals, 90.0);
  const double p10 = percentile_linear(vals, 10.0);
  return 10.0 * std::log10(p90 / p10);
}

std::vector<double> normalize_scores(const std::vector<double>& raw) {
  if (raw.empty()) throw DataError("cannot normalize an empty score list");
  const auto [mn_it, mx_it] = std::minmax_element(raw.begin(), raw.end());
  const double mn = *mn_it, mx = *mx_it;
  std::vector<double> out(raw.size());
  if (mx == mn) {
    std::fill(out.begin(), out.end(), 0.5);
    return out;
  }
  for (std::size_t i = 0; i < raw.size(); ++i)
    out[i] = (raw[i] - mn) / (mx - mn);
  return out;
}

namespace {

// Pools the enl_window x enl_window neighborhood of one location across
// all dates into a single sample. Returns false when the pooled sample is
// degenerate or dominated by no-data.
bool pooled_window_enl(const RasterStack& filtered, int row, int col,
                       int window, double& out) {
  const int r = window / 2;
  std::vector<double> sample;
  sample.reserve(filtered.dates.size() * window * window);
  for (std::size_t d = 0; d < filtered.dates.size(); ++d) {
    auto s = filtered.slice(static_cast<int>(d), 0);
    for (int dy = -r; dy <= r; ++dy) {
      const int y = mirror_index(row + dy, filtered.height);
      for (int dx = -r; dx <= r; ++dx) {
        const int x = mirror_index(col + dx, filtered.width);
        const double v = s[static_cast<std::size_t>(y) * filtered.width + x];
        if (!std::isnan(v)) sample.push_back(v);
      }
    }
  }
  if (sample.size() < filtered.dates.size() * window * window / 2) return false;
  try {
    out = enl(sample);
  } catch (const DataError&) {
    return false;
  }
  return true;
}

}  // namespace

std::vector<CombinationScore> score_combinations(
    const RasterStack& stack, const SampleSet& forest,
    const SampleSet& cleared, const std::vector<FilterCombination>& combos,
    const std::string& band, const ScoreOptions& options) {
  const auto forest_locs = forest.of_class(SampleClass::kInvariantForest);
  const auto cleared_locs = cleared.of_class(SampleClass::kClearedForest);
  if (forest_locs.empty() || cleared_locs.empty())
    throw DataError("scoring needs non-empty forest and cleared sample sets");
  if (combos.empty()) throw DataError("no filter combinations to score");
  forest.bind_check(stack);
  cleared.bind_check(stack);

  std::vector<CombinationScore> scores(combos.size());

  // The temporal stage dominates the cost; group combinations by inner
  // estimator so each stage is filtered once and reused across the
  // post-spatial variants.
  std::vector<int> order(combos.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return combos[a].temporal_inner.name() < combos[b].temporal_inner.name();
  });

  std::string cached_inner;
  RasterStack temporal_stage;
  for (int idx : order) {
    const FilterCombination& combo = combos[idx];
    const std::string inner = combo.temporal_inner.name();
    if (inner != cached_inner) {
      FilterCombination stage{combo.temporal_inner,
                              SpatialFilterSpec{}};  // post = none
      temporal_stage = apply_combination(stack, stage, band);
      cached_inner = inner;
    }
    RasterStack filtered = temporal_stage;
    if (combo.post_spatial.kind != FilterKind::kNone) {
      for (std::size_t d = 0; d < filtered.dates.size(); ++d) {
        Grid g = apply_spatial(filtered.slice_grid(static_cast<int>(d), 0),
                               combo.post_spatial);
        filtered.set_slice(static_cast<int>(d), 0, g);
      }
    }

    CombinationScore& cs = scores[idx];
    cs.combo = combo;
    double enl_sum = 0.0;
    for (const auto& loc : forest_locs) {
      double e = 0.0;
      if (pooled_window_enl(filtered, loc.row, loc.col, options.enl_window,
                            e)) {
        enl_sum += e;
        ++cs.enl_locations;
      }
    }
    double range_sum = 0.0;
    for (const auto& loc : cleared_locs) {
      try {
        TimeSeries ts = extract_series(filtered, loc.row, loc.col, band);
        range_sum += range_index(ts);
        ++cs.range_locations;
      } catch (const DataError&) {
        // location failed; counted against the 50% cutoff below
      }
    }
    cs.scored = cs.enl_locations * 2 > static_cast<int>(forest_locs.size()) &&
                cs.range_locations * 2 > static_cast<int>(cleared_locs.size());
    if (cs.enl_locations > 0) cs.mean_enl = enl_sum / cs.enl_locations;
    if (cs.range_locations > 0)
      cs.mean_range_db = range_sum / cs.range_locations;
  }

  // Normalize per index across the scored combinations only.
  std::vector<double> enls, ranges;
  for (const auto& cs : scores) {
    if (!cs.scored) continue;
    enls.push_back(cs.mean_enl);
    ranges.push_back(cs.mean_range_db);
  }
  if (!enls.empty()) {
    const auto n_enl = normalize_scores(enls);
    const auto n_rng = normalize_scores(ranges);
    std::size_t j = 0;
    for (auto& cs : scores) {
      if (!cs.scored) continue;
      cs.normalized_enl = n_enl[j];
      cs.normalized_range = n_rng[j];
      cs.score = (cs.normalized_enl + cs.normalized_range) / 2.0;
      ++j;
    }
  }

  std::sort(scores.begin(), scores.end(),
            [](const CombinationScore& a, const CombinationScore& b) {
              if (a.scored != b.scored) return a.scored;
              if (a.score != b.score) return a.score > b.score;
              return a.combo.name() < b.combo.name();
            });
  return scores;
}

void write_scores_csv(const std::vector<CombinationScore>& scores,
                      const std::filesystem::path& csv) {
  std::ofstream out(csv, std::ios::trunc);
  if (!out) throw IoError("cannot write " + csv.string());
  out << "combo,mean_enl,mean_range,norm_enl,norm_range,score\n";
  for (const auto& cs : scores) {
    if (cs.scored) {
      out << cs.combo.name() << ',' << fmt_g6(cs.mean_enl) << ','
          << fmt_g6(cs.mean_range_db) << ',' << fmt_g6(cs.normalized_enl)
          << ',' << fmt_g6(cs.normalized_range) << ',' << fmt_g6(cs.score)
          << '\n';
    } else {
      out << cs.combo.name() << ",,,,,\n";  // failed on > 50% of samples
    }
  }
}

}  // namespace saralert
