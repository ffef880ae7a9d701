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

#include "saralert/filters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "saralert/kernels.hpp"
#include "saralert/parallel.hpp"

namespace saralert {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void require_window(int window) {
  if (window < 1 || window % 2 == 0)
    throw ConfigError("filter window must be a positive odd integer, got " +
                      std::to_string(window));
}

}  // namespace

std::string SpatialFilterSpec::name() const {
  switch (kind) {
    case FilterKind::kNone:
      return "none";
    case FilterKind::kMedian:
      return "median" + std::to_string(window);
    case FilterKind::kFrost:
      return "frost" + std::to_string(window);
    case FilterKind::kLee:
      return "lee" + std::to_string(window);
  }
  return "none";
}

SpatialFilterSpec SpatialFilterSpec::parse(std::string_view name) {
  SpatialFilterSpec spec;
  if (name == "none") return spec;
  auto digits = name.find_first_of("0123456789");
  if (digits == std::string_view::npos || digits == 0)
    throw ConfigError("bad filter name '" + std::string(name) + "'");
  const std::string_view kind_name = name.substr(0, digits);
  if (kind_name == "median")
    spec.kind = FilterKind::kMedian;
  else if (kind_name == "frost")
    spec.kind = FilterKind::kFrost;
  else if (kind_name == "lee")
    spec.kind = FilterKind::kLee;
  else
    throw ConfigError("unknown filter kind '" + std::string(kind_name) + "'");
  spec.window = std::stoi(std::string(name.substr(digits)));
  spec.validate();
  return spec;
}

void SpatialFilterSpec::validate() const {
  if (kind == FilterKind::kNone) return;
  if (window < 3 || window % 2 == 0)
    throw ConfigError("filter window must be odd and >= 3, got " +
                      std::to_string(window));
  if (kind == FilterKind::kFrost && !(damping > 0.0))
    throw ConfigError("frost damping must be positive");
  if (kind == FilterKind::kLee && !(nominal_looks > 0.0))
    throw ConfigError("lee nominal_looks must be positive");
}

std::string FilterCombination::name() const {
  return temporal_inner.name() + "+" + post_spatial.name();
}

FilterCombination FilterCombination::parse(std::string_view name) {
  auto plus = name.find('+');
  if (plus == std::string_view::npos)
    throw ConfigError("combination must be '<temporal>+<spatial>', got '" +
                      std::string(name) + "'");
  FilterCombination combo;
  combo.temporal_inner = SpatialFilterSpec::parse(name.substr(0, plus));
  combo.post_spatial = SpatialFilterSpec::parse(name.substr(plus + 1));
  return combo;
}

std::vector<FilterCombination> bench_grid() {
  const char* axis[] = {"none", "median9", "frost5", "frost9", "lee3"};
  std::vector<FilterCombination> grid;
  grid.reserve(25);
  for (const char* temporal : axis)
    for (const char* spatial : axis)
      grid.push_back(FilterCombination::parse(std::string(temporal) + "+" +
                                              spatial));
  return grid;
}

BoxStats box_sums(const Grid& image, int window) {
  require_window(window);
  const int w = image.width, h = image.height, r = window / 2;

  // Horizontal pass: mirror-padded running sums per row. NaN samples
  // contribute zero to the running sums and are tracked in a separate
  // count so they cannot poison the accumulator after leaving the window.
  Grid hsum(w, h), hsq(w, h), hnan(w, h);
  parallel_chunks(static_cast<std::size_t>(h), [&](std::size_t r0,
                                                   std::size_t r1) {
    for (std::size_t row = r0; row < r1; ++row) {
      const int y = static_cast<int>(row);
      auto sample = [&](int x) { return image.at(y, mirror_index(x, w)); };
      double s = 0.0, s2 = 0.0, bad = 0.0;
      for (int dx = -r; dx <= r; ++dx) {
        const double v = sample(dx);
        if (std::isnan(v)) {
          bad += 1.0;
        } else {
          s += v;
          s2 += v * v;
        }
      }
      hsum.at(y, 0) = s;
      hsq.at(y, 0) = s2;
      hnan.at(y, 0) = bad;
      for (int x = 1; x < w; ++x) {
        const double vin = sample(x + r);
        const double vout = sample(x - 1 - r);
        if (std::isnan(vin)) {
          bad += 1.0;
        } else {
          s += vin;
          s2 += vin * vin;
        }
        if (std::isnan(vout)) {
          bad -= 1.0;
        } else {
          s -= vout;
          s2 -= vout * vout;
        }
        hsum.at(y, x) = s;
        hsq.at(y, x) = s2;
        hnan.at(y, x) = bad;
      }
    }
  });

  // Vertical pass: running column sums over the horizontal sums, again
  // mirror-padded. The add/sub kernels keep per-column operation order
  // fixed, so results do not depend on the SIMD backend.
  BoxStats out{Grid(w, h), Grid(w, h)};
  const auto& ops = kernels::active();
  const std::size_t n = static_cast<std::size_t>(w);
  std::vector<double> csum(n, 0.0), csq(n, 0.0), cnan(n, 0.0);
  auto row_ptr = [&](Grid& g, int y) {
    return g.data.data() + static_cast<std::size_t>(mirror_index(y, h)) * w;
  };
  for (int dy = -r; dy <= r; ++dy) {
    ops.add(csum.data(), row_ptr(hsum, dy), n);
    ops.add(csq.data(), row_ptr(hsq, dy), n);
    ops.add(cnan.data(), row_ptr(hnan, dy), n);
  }
  for (int y = 0;; ++y) {
    double* sum_row = out.sum.data.data() + static_cast<std::size_t>(y) * w;
    double* sq_row = out.sumsq.data.data() + static_cast<std::size_t>(y) * w;
    for (std::size_t x = 0; x < n; ++x) {
      if (cnan[x] > 0.0) {
        sum_row[x] = kNan;
        sq_row[x] = kNan;
      } else {
        sum_row[x] = csum[x];
        sq_row[x] = csq[x];
      }
    }
    if (y + 1 >= h) break;
    ops.add(csum.data(), row_ptr(hsum, y + 1 + r), n);
    ops.add(csq.data(), row_ptr(hsq, y + 1 + r), n);
    ops.add(cnan.data(), row_ptr(hnan, y + 1 + r), n);
    ops.sub(csum.data(), row_ptr(hsum, y - r), n);
    ops.sub(csq.data(), row_ptr(hsq, y - r), n);
    ops.sub(cnan.data(), row_ptr(hnan, y - r), n);
  }
  return out;
}

Grid median_filter(const Grid& image, int window) {
  require_window(window);
  const int w = image.width, h = image.height, r = window / 2;
  Grid out(w, h);
  parallel_chunks(static_cast<std::size_t>(h), [&](std::size_t r0,
                                                   std::size_t r1) {
    std::vector<double> buf(static_cast<std::size_t>(window) * window);
    for (std::size_t row = r0; row < r1; ++row) {
      const int y = static_cast<int>(row);
      for (int x = 0; x < w; ++x) {
        bool has_nan = false;
        std::size_t k = 0;
        for (int dy = -r; dy <= r && !has_nan; ++dy) {
          const int yy = mirror_index(y + dy, h);
          for (int dx = -r; dx <= r; ++dx) {
            const double v = image.at(yy, mirror_index(x + dx, w));
            if (std::isnan(v)) {
              has_nan = true;
              break;
            }
            buf[k++] = v;
          }
        }
        if (has_nan) {
          out.at(y, x) = kNan;
          continue;
        }
        auto mid = buf.begin() + buf.size() / 2;
        std::nth_element(buf.begin(), mid, buf.end());
        out.at(y, x) = *mid;
      }
    }
  });
  return out;
}

Grid lee_filter(const Grid& image, int window, double nominal_looks) {
  require_window(window);
  if (!(nominal_looks > 0.0))
    throw ConfigError("lee nominal_looks must be positive");
  BoxStats stats = box_sums(image, window);
  const double inv_count = 1.0 / (static_cast<double>(window) * window);
  const double cu2 = 1.0 / nominal_looks;

  Grid out(image.width, image.height);
  const std::size_t w = static_cast<std::size_t>(image.width);
  parallel_chunks(static_cast<std::size_t>(image.height),
                  [&](std::size_t r0, std::size_t r1) {
                    const std::size_t begin = r0 * w, end = r1 * w;
                    kernels::active().lee_finalize(
                        out.data.data() + begin, image.data.data() + begin,
                        stats.sum.data.data() + begin,
                        stats.sumsq.data.data() + begin, inv_count, cu2,
                        end - begin);
                  });
  return out;
}

Grid frost_filter(const Grid& image, int window, double damping) {
  require_window(window);
  if (!(damping > 0.0)) throw ConfigError("frost damping must be positive");
  const int w = image.width, h = image.height, r = window / 2;
  BoxStats stats = box_sums(image, window);
  const double inv_count = 1.0 / (static_cast<double>(window) * window);

  // Window offsets grouped by Euclidean distance so each pixel computes
  // one exp per distinct distance instead of one per window sample.
  struct DistanceGroup {
    double dist;
    std::vector<std::pair<int, int>> offsets;
  };
  std::vector<DistanceGroup> groups;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const double d = std::sqrt(static_cast<double>(dy * dy + dx * dx));
      auto it = std::find_if(groups.begin(), groups.end(),
                             [&](const DistanceGroup& g) {
                               return g.dist == d;
                             });
      if (it == groups.end()) {
        groups.push_back({d, {{dy, dx}}});
      } else {
        it->offsets.emplace_back(dy, dx);
      }
    }
  }

  Grid out(w, h);
  parallel_chunks(static_cast<std::size_t>(h), [&](std::size_t r0,
                                                   std::size_t r1) {
    for (std::size_t row = r0; row < r1; ++row) {
      const int y = static_cast<int>(row);
      for (int x = 0; x < w; ++x) {
        const double sum = stats.sum.at(y, x);
        if (std::isnan(sum)) {
          out.at(y, x) = kNan;
          continue;
        }
        const double m = sum * inv_count;
        const double msq = m * m;
        double ci2 = 0.0;
        if (msq > 0.0) {
          const double var =
              std::max(0.0, stats.sumsq.at(y, x) * inv_count - msq);
          ci2 = var / msq;
        }
        const double decay = damping * ci2;
        double num = 0.0, den = 0.0;
        for (const auto& g : groups) {
          const double weight = std::exp(-decay * g.dist);
          for (const auto& [dy, dx] : g.offsets) {
            num += weight *
                   image.at(mirror_index(y + dy, h), mirror_index(x + dx, w));
            den += weight;
          }
        }
        out.at(y, x) = num / den;
      }
    }
  });
  return out;
}

Grid apply_spatial(const Grid& image, const SpatialFilterSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case FilterKind::kNone:
      return image;
    case FilterKind::kMedian:
      return median_filter(image, spec.window);
    case FilterKind::kFrost:
      return frost_filter(image, spec.window, spec.damping);
    case FilterKind::kLee:
      return lee_filter(image, spec.window, spec.nominal_looks);
  }
  return image;
}

namespace {

RasterStack single_band_like(const RasterStack& stack,
                             const std::string& band) {
  RasterStack out;
  out.width = stack.width;
  out.height = stack.height;
  out.bands = {band};
  out.dates = stack.dates;
  out.unit = stack.unit;
  out.geotransform = stack.geotransform;
  out.pixels.resize(stack.dates.size() * stack.slice_size());
  return out;
}

}  // namespace

RasterStack quegan_yu(const RasterStack& stack,
                      const SpatialFilterSpec& estimator,
                      const std::string& band) {
  if (stack.unit != UnitDomain::kLinearPower)
    throw DataError("multitemporal filtering expects a linear-power stack");
  if (estimator.kind == FilterKind::kNone)
    throw ConfigError("quegan_yu requires a non-none estimator");
  const int b = stack.band_index(band);
  if (b < 0) throw DataError("unknown band '" + band + "'");
  const int n_dates = static_cast<int>(stack.dates.size());

  const auto& ops = kernels::active();
  std::vector<Grid> estimates(n_dates);
  std::vector<double> acc(stack.slice_size(), 0.0);
  for (int i = 0; i < n_dates; ++i) {
    estimates[i] = apply_spatial(stack.slice_grid(i, b), estimator);
    ops.ratio_accum(acc.data(), stack.slice(i, b).data(),
                    estimates[i].data.data(), acc.size());
  }

  RasterStack out = single_band_like(stack, band);
  const double inv_n = 1.0 / n_dates;
  for (int k = 0; k < n_dates; ++k) {
    ops.scaled_product(out.slice(k, 0).data(), estimates[k].data.data(),
                       acc.data(), inv_n, acc.size());
  }
  return out;
}

RasterStack apply_combination(const RasterStack& stack,
                              const FilterCombination& combo,
                              const std::string& band) {
  const int b = stack.band_index(band);
  if (b < 0) throw DataError("unknown band '" + band + "'");

  RasterStack out;
  if (combo.temporal_inner.kind == FilterKind::kNone) {
    out = single_band_like(stack, band);
    for (std::size_t d = 0; d < stack.dates.size(); ++d) {
      auto src = stack.slice(static_cast<int>(d), b);
      std::copy(src.begin(), src.end(),
                out.slice(static_cast<int>(d), 0).begin());
    }
  } else {
    out = quegan_yu(stack, combo.temporal_inner, band);
  }
  if (combo.post_spatial.kind != FilterKind::kNone) {
    for (std::size_t d = 0; d < out.dates.size(); ++d) {
      Grid g = apply_spatial(out.slice_grid(static_cast<int>(d), 0),
                             combo.post_spatial);
      out.set_slice(static_cast<int>(d), 0, g);
    }
  }
  return out;
}

}  // namespace saralert
