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

#include "saralert/stack.hpp"

#include <algorithm>
#include <cmath>

namespace saralert {

int RasterStack::band_index(const std::string& band) const {
  auto it = std::find(bands.begin(), bands.end(), band);
  return it == bands.end() ? -1 : static_cast<int>(it - bands.begin());
}

int RasterStack::first_date_on_or_after(Date d) const {
  auto it = std::lower_bound(dates.begin(), dates.end(), d);
  return static_cast<int>(it - dates.begin());
}

Grid RasterStack::slice_grid(int date_idx, int band_idx) const {
  Grid g(width, height);
  auto s = slice(date_idx, band_idx);
  std::copy(s.begin(), s.end(), g.data.begin());
  return g;
}

void RasterStack::set_slice(int date_idx, int band_idx, const Grid& g) {
  if (g.width != width || g.height != height)
    throw DataError("set_slice: grid shape does not match stack");
  auto s = slice(date_idx, band_idx);
  std::copy(g.data.begin(), g.data.end(), s.begin());
}

void RasterStack::validate() const {
  if (width <= 0 || height <= 0)
    throw DataError("stack has empty extent");
  if (bands.empty()) throw DataError("stack has no bands");
  if (dates.empty()) throw DataError("stack has no dates");
  for (std::size_t i = 1; i < dates.size(); ++i) {
    if (!(dates[i - 1] < dates[i]))
      throw DataError("stack dates must be strictly increasing (duplicate or "
                      "unsorted date " + dates[i].to_string() + ")");
  }
  const std::size_t expected =
      dates.size() * bands.size() * slice_size();
  if (pixels.size() != expected)
    throw DataError("stack pixel count " + std::to_string(pixels.size()) +
                    " does not match declared shape (" +
                    std::to_string(expected) + ")");
  for (double v : pixels) {
    if (std::isnan(v)) continue;  // explicit no-data
    if (std::isinf(v))
      throw DataError("stack contains non-finite (inf) values");
    if (unit == UnitDomain::kLinearPower && v < 0.0)
      throw DataError("linear-power stack contains negative values");
  }
}

std::string sample_class_name(SampleClass c) {
  return c == SampleClass::kInvariantForest ? "invariant-forest"
                                            : "cleared-forest";
}

SampleClass parse_sample_class(std::string_view name) {
  if (name == "invariant-forest") return SampleClass::kInvariantForest;
  if (name == "cleared-forest") return SampleClass::kClearedForest;
  throw DataError("unknown sample class: '" + std::string(name) + "'");
}

std::vector<SampleLocation> SampleSet::of_class(SampleClass c) const {
  std::vector<SampleLocation> out;
  for (const auto& l : locations)
    if (l.cls == c) out.push_back(l);
  return out;
}

std::size_t SampleSet::count_of(SampleClass c) const {
  std::size_t n = 0;
  for (const auto& l : locations) n += l.cls == c;
  return n;
}

void SampleSet::bind_check(const RasterStack& stack) const {
  for (const auto& l : locations) {
    if (l.row < 0 || l.row >= stack.height || l.col < 0 ||
        l.col >= stack.width)
      throw DataError("sample location (" + std::to_string(l.row) + "," +
                      std::to_string(l.col) + ") outside stack extent " +
                      std::to_string(stack.height) + "x" +
                      std::to_string(stack.width));
  }
}

}  // namespace saralert
