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

#ifndef SARALERT_TYPES_HPP_
#define SARALERT_TYPES_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace saralert {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad file contents, impossible values, broken invariants in loaded data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Filesystem-level failures (missing file, short read, unwritable path).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or arguments (bad filter spec, alpha out of range).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Calendar date with day resolution, stored as days since 1970-01-01.
/// Acquisition metadata uses ISO-8601 (YYYY-MM-DD) strings.
class Date {
 public:
  Date() = default;

  static Date parse(std::string_view iso);  // throws DataError on bad input
  static Date from_days(std::int64_t days) {
    Date d;
    d.days_ = days;
    return d;
  }

  std::int64_t days() const { return days_; }
  std::string to_string() const;
  Date plus_days(std::int64_t n) const { return from_days(days_ + n); }

  auto operator<=>(const Date&) const = default;

 private:
  std::int64_t days_ = 0;
};

inline std::int64_t operator-(Date a, Date b) { return a.days() - b.days(); }

enum class UnitDomain { kLinearPower, kDb };

std::string unit_domain_name(UnitDomain u);
UnitDomain parse_unit_domain(std::string_view name);

/// Dense row-major image of doubles. NaN marks no-data throughout the
/// processing chain; the on-disk format is float32 (see stack_io).
struct Grid {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  Grid() = default;
  Grid(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int row, int col) {
    return data[static_cast<std::size_t>(row) * width + col];
  }
  double at(int row, int col) const {
    return data[static_cast<std::size_t>(row) * width + col];
  }
  std::size_t size() const { return data.size(); }
  bool same_shape(const Grid& o) const {
    return width == o.width && height == o.height;
  }
  bool in_bounds(int row, int col) const {
    return row >= 0 && row < height && col >= 0 && col < width;
  }
};

/// Reflects an out-of-range index back into [0, n), mirroring about the
/// edges without repeating the edge sample. Folds repeatedly, so windows
/// wider than the grid still resolve.
int mirror_index(int i, int n);

}  // namespace saralert

#endif  // SARALERT_TYPES_HPP_
