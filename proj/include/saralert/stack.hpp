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

#ifndef SARALERT_STACK_HPP_
#define SARALERT_STACK_HPP_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "saralert/types.hpp"

namespace saralert {

/// Co-registered multi-date, multi-band image cube. Pixels are stored
/// date-major ([date][band][row][col]) so a (date, band) slice is
/// contiguous. Immutable after load by convention; concurrent reads are
/// safe.
struct RasterStack {
  int width = 0;
  int height = 0;
  std::vector<std::string> bands;
  std::vector<Date> dates;
  UnitDomain unit = UnitDomain::kLinearPower;
  std::optional<std::array<double, 6>> geotransform;
  std::vector<double> pixels;

  std::size_t slice_size() const {
    return static_cast<std::size_t>(width) * height;
  }
  std::size_t slice_offset(int date_idx, int band_idx) const {
    return (static_cast<std::size_t>(date_idx) * bands.size() + band_idx) *
           slice_size();
  }
  std::span<double> slice(int date_idx, int band_idx) {
    return {pixels.data() + slice_offset(date_idx, band_idx), slice_size()};
  }
  std::span<const double> slice(int date_idx, int band_idx) const {
    return {pixels.data() + slice_offset(date_idx, band_idx), slice_size()};
  }

  /// -1 when the band is not present.
  int band_index(const std::string& band) const;
  /// Index of the first date >= d, or dates.size() when none.
  int first_date_on_or_after(Date d) const;

  Grid slice_grid(int date_idx, int band_idx) const;
  void set_slice(int date_idx, int band_idx, const Grid& g);

  /// Shape/metadata invariants (strictly increasing dates, pixel count,
  /// unit-domain value checks). Throws DataError.
  void validate() const;
};

enum class SampleClass { kInvariantForest, kClearedForest };

std::string sample_class_name(SampleClass c);
SampleClass parse_sample_class(std::string_view name);

struct SampleLocation {
  int row = 0;
  int col = 0;
  SampleClass cls = SampleClass::kInvariantForest;
  std::optional<Date> reference_date;  // required for cleared-forest
};

/// A set of sample locations; may mix invariant-forest and cleared-forest
/// rows (the evaluation takes both at once).
struct SampleSet {
  std::vector<SampleLocation> locations;

  std::vector<SampleLocation> of_class(SampleClass c) const;
  std::size_t count_of(SampleClass c) const;
  /// Throws DataError when any location falls outside the stack extent.
  void bind_check(const RasterStack& stack) const;
  void append(const SampleSet& other) {
    locations.insert(locations.end(), other.locations.begin(),
                     other.locations.end());
  }
};

/// Backscatter values of one pixel/band across the stack's dates.
struct TimeSeries {
  std::vector<Date> dates;
  std::vector<double> values;
  std::string band;
  int row = 0;
  int col = 0;
  UnitDomain unit = UnitDomain::kLinearPower;
};

}  // namespace saralert

#endif  // SARALERT_STACK_HPP_
