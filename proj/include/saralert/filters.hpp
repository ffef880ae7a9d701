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

#ifndef SARALERT_FILTERS_HPP_
#define SARALERT_FILTERS_HPP_

#include <string>
#include <vector>

#include "saralert/stack.hpp"

namespace saralert {

enum class FilterKind { kNone, kMedian, kFrost, kLee };

/// One spatial despeckling estimator. All filters use mirror padding and
/// operate on linear-power intensities; any window touching a NaN
/// (no-data) pixel outputs NaN.
struct SpatialFilterSpec {
  FilterKind kind = FilterKind::kNone;
  int window = 0;
  double damping = 1.0;        // Frost only
  double nominal_looks = 4.7;  // Lee only; Sentinel-1 IW GRD multilook

  std::string name() const;  // "none", "median9", "frost5", "lee3", ...
  /// Parses names of the form <kind><window>. Throws ConfigError.
  static SpatialFilterSpec parse(std::string_view name);
  void validate() const;

  bool operator==(const SpatialFilterSpec& o) const {
    return kind == o.kind && window == o.window;
  }
};

/// (temporal-inner estimator, post-spatial filter) pair. A kNone inner
/// estimator means no multitemporal filtering at all.
struct FilterCombination {
  SpatialFilterSpec temporal_inner;
  SpatialFilterSpec post_spatial;

  std::string name() const;  // "median9+frost9"
  static FilterCombination parse(std::string_view name);
};

/// The benchmarked 5x5 grid: {none, median9, frost5, frost9, lee3} on both
/// axes, 25 combinations.
std::vector<FilterCombination> bench_grid();

Grid median_filter(const Grid& image, int window);
/// Minimum-MSE Lee filter: out = m + W (I - m), W = max(0, 1 - Cu^2/CI^2),
/// Cu = 1/sqrt(L), CI = window std/mean (population moments).
Grid lee_filter(const Grid& image, int window, double nominal_looks);
/// Frost filter: exponentially distance-damped window mean with per-window
/// weight decay damping * CI^2.
Grid frost_filter(const Grid& image, int window, double damping);
Grid apply_spatial(const Grid& image, const SpatialFilterSpec& spec);

/// Multitemporal speckle filter over one band:
///   J_k(x,y) = (<I_k>(x,y) / N) * sum_i I_i(x,y) / <I_i>(x,y)
/// where <I_i> is the estimator applied to the date-i image. Pixels where
/// any estimate is <= 0 become NaN. Returns a single-band stack with the
/// input dates.
RasterStack quegan_yu(const RasterStack& stack,
                      const SpatialFilterSpec& estimator,
                      const std::string& band);

/// Temporal-then-spatial composition; (none, none) returns the band
/// unchanged. Output is a single-band stack.
RasterStack apply_combination(const RasterStack& stack,
                              const FilterCombination& combo,
                              const std::string& band);

/// Per-pixel sums and sums of squares over mirror-padded window x window
/// neighborhoods; both outputs are NaN wherever the window touches a NaN.
/// Shared by the adaptive filters; exposed for the quality metrics.
struct BoxStats {
  Grid sum;
  Grid sumsq;
};
BoxStats box_sums(const Grid& image, int window);

}  // namespace saralert

#endif  // SARALERT_FILTERS_HPP_
