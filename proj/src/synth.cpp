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

#include "saralert/synth.hpp"

#include <cmath>
#include <fstream>

#include "saralert/parallel.hpp"
#include "saralert/util.hpp"

namespace saralert {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

double SplitMix64::next_normal() {
  const double u1 = next_unit();
  const double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double SplitMix64::next_gamma(double shape) {
  if (!(shape > 0.0)) throw ConfigError("gamma shape must be positive");
  if (shape < 1.0) {
    // Boost: G(a) = G(a + 1) * U^(1/a).
    const double g = next_gamma(shape + 1.0);
    return g * std::pow(next_unit(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = next_unit();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::uint64_t derive_stream(std::uint64_t seed,
                            std::initializer_list<std::uint64_t> keys) {
  SplitMix64 rng(seed);
  std::uint64_t h = rng.next_u64();
  for (std::uint64_t k : keys) {
    SplitMix64 mix(h ^ (k + 0x9e3779b97f4a7c15ULL));
    h = mix.next_u64();
  }
  return h;
}

void SceneConfig::validate() const {
  if (width <= 0 || height <= 0) throw ConfigError("scene extent is empty");
  if (dates.empty()) throw ConfigError("scene needs at least one date");
  for (std::size_t i = 1; i < dates.size(); ++i)
    if (!(dates[i - 1] < dates[i]))
      throw ConfigError("scene dates must be strictly increasing");
  if (bands.empty()) throw ConfigError("scene needs at least one band");
  if (forest_mean_db.size() != bands.size() ||
      forest_sigma_db.size() != bands.size())
    throw ConfigError("forest_mean_db/forest_sigma_db must match band count");
  for (double s : forest_sigma_db)
    if (s < 0.0) throw ConfigError("forest_sigma_db must be >= 0");
  if (!(looks > 0.0)) throw ConfigError("looks must be positive");
  for (const auto& e : events) {
    if (e.height <= 0 || e.width <= 0 || e.row0 < 0 || e.col0 < 0 ||
        e.row0 + e.height > height || e.col0 + e.width > width)
      throw ConfigError("event polygon out of scene bounds");
    if (!(e.drop_db > 0.0)) throw ConfigError("event drop_db must be > 0");
    if (e.date < dates.front() || dates.back() < e.date)
      throw ConfigError("event date outside the scene date range");
  }
  if (forest_samples < 0 || cleared_samples < 0)
    throw ConfigError("sample counts must be >= 0");
}

namespace {

// Separate sub-streams per purpose so adding draws to one never shifts
// another.
enum StreamTag : std::uint64_t {
  kTagPixel = 1,
  kTagForestSamples = 2,
  kTagClearedSamples = 3,
};

int event_index_at(const SceneConfig& cfg, int row, int col) {
  for (std::size_t e = 0; e < cfg.events.size(); ++e) {
    const auto& ev = cfg.events[e];
    if (row >= ev.row0 && row < ev.row0 + ev.height && col >= ev.col0 &&
        col < ev.col0 + ev.width)
      return static_cast<int>(e);
  }
  return -1;
}

bool near_any_event(const SceneConfig& cfg, int row, int col, int margin) {
  for (const auto& ev : cfg.events) {
    if (row >= ev.row0 - margin && row < ev.row0 + ev.height + margin &&
        col >= ev.col0 - margin && col < ev.col0 + ev.width + margin)
      return true;
  }
  return false;
}

}  // namespace

SceneResult generate_scene(const SceneConfig& config) {
  config.validate();
  const int w = config.width, h = config.height;
  const int n_dates = static_cast<int>(config.dates.size());
  const int n_bands = static_cast<int>(config.bands.size());

  SceneResult result;
  RasterStack& stack = result.stack;
  stack.width = w;
  stack.height = h;
  stack.bands = config.bands;
  stack.dates = config.dates;
  stack.unit = UnitDomain::kLinearPower;
  stack.pixels.resize(static_cast<std::size_t>(n_dates) * n_bands * w * h);

  // Truth raster (first band).
  result.truth.width = w;
  result.truth.height = h;
  result.truth.event_date.resize(static_cast<std::size_t>(w) * h);
  result.truth.pre_db.assign(static_cast<std::size_t>(w) * h,
                             config.forest_mean_db[0]);
  result.truth.post_db.assign(static_cast<std::size_t>(w) * h,
                              config.forest_mean_db[0]);
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      const int e = event_index_at(config, row, col);
      if (e >= 0) {
        const std::size_t p = static_cast<std::size_t>(row) * w + col;
        result.truth.event_date[p] = config.events[e].date;
        result.truth.post_db[p] =
            config.forest_mean_db[0] - config.events[e].drop_db;
      }
    }
  }

  parallel_chunks(static_cast<std::size_t>(h), [&](std::size_t r0,
                                                   std::size_t r1) {
    for (std::size_t row = r0; row < r1; ++row) {
      for (int col = 0; col < w; ++col) {
        const int ev = event_index_at(config, static_cast<int>(row), col);
        for (int d = 0; d < n_dates; ++d) {
          const bool dropped =
              ev >= 0 && !(config.dates[d] < config.events[ev].date);
          for (int b = 0; b < n_bands; ++b) {
            SplitMix64 rng(derive_stream(
                config.seed,
                {kTagPixel, static_cast<std::uint64_t>(d),
                 static_cast<std::uint64_t>(b), row,
                 static_cast<std::uint64_t>(col)}));
            double level = config.forest_mean_db[b];
            if (config.forest_sigma_db[b] > 0.0)
              level += config.forest_sigma_db[b] * rng.next_normal();
            if (dropped) level -= config.events[ev].drop_db;
            const double speckle = rng.next_gamma(config.looks) / config.looks;
            const double value = std::pow(10.0, level / 10.0) * speckle;
            // Quantize to the file format so write/load round-trips
            // bit-identically.
            stack.slice(d, b)[static_cast<std::size_t>(row) * w + col] =
                static_cast<double>(static_cast<float>(value));
          }
        }
      }
    }
  });

  // Invariant-forest samples: away from every event and the border.
  {
    SplitMix64 rng(derive_stream(config.seed, {kTagForestSamples}));
    const int margin = config.sample_margin;
    std::vector<bool> taken(static_cast<std::size_t>(w) * h, false);
    int placed = 0;
    long attempts = 0;
    const long max_attempts = 1000L * std::max(1, config.forest_samples);
    while (placed < config.forest_samples) {
      if (++attempts > max_attempts)
        throw ConfigError("cannot place forest samples: scene too crowded");
      const int row =
          margin + static_cast<int>(rng.next_unit() * (h - 2 * margin));
      const int col =
          margin + static_cast<int>(rng.next_unit() * (w - 2 * margin));
      if (row >= h - margin || col >= w - margin) continue;
      if (near_any_event(config, row, col, margin)) continue;
      const std::size_t p = static_cast<std::size_t>(row) * w + col;
      if (taken[p]) continue;
      taken[p] = true;
      result.forest.locations.push_back(
          {row, col, SampleClass::kInvariantForest, std::nullopt});
      ++placed;
    }
  }

  // Cleared samples: inside events, inset from the event edges.
  if (config.cleared_samples > 0) {
    if (config.events.empty())
      throw ConfigError("cleared samples requested but the scene has no "
                        "events");
    SplitMix64 rng(derive_stream(config.seed, {kTagClearedSamples}));
    std::vector<bool> taken(static_cast<std::size_t>(w) * h, false);
    int placed = 0;
    long attempts = 0;
    const long max_attempts = 1000L * config.cleared_samples;
    while (placed < config.cleared_samples) {
      if (++attempts > max_attempts)
        throw ConfigError("cannot place cleared samples: events too small "
                          "for the requested count");
      const auto& ev = config.events[static_cast<std::size_t>(
          rng.next_unit() * config.events.size())];
      const int inner_h = ev.height - 2 * config.cleared_inset;
      const int inner_w = ev.width - 2 * config.cleared_inset;
      if (inner_h <= 0 || inner_w <= 0) continue;
      const int row = ev.row0 + config.cleared_inset +
                      static_cast<int>(rng.next_unit() * inner_h);
      const int col = ev.col0 + config.cleared_inset +
                      static_cast<int>(rng.next_unit() * inner_w);
      const std::size_t p = static_cast<std::size_t>(row) * w + col;
      if (taken[p]) continue;
      taken[p] = true;
      result.cleared.locations.push_back(
          {row, col, SampleClass::kClearedForest, ev.date});
      ++placed;
    }
  }

  return result;
}

void write_truth_csv(const SceneTruth& truth,
                     const std::filesystem::path& csv) {
  std::ofstream out(csv, std::ios::trunc);
  if (!out) throw IoError("cannot write " + csv.string());
  out << "row,col,event_date,pre_db,post_db\n";
  for (int row = 0; row < truth.height; ++row) {
    for (int col = 0; col < truth.width; ++col) {
      const std::size_t p =
          static_cast<std::size_t>(row) * truth.width + col;
      out << row << ',' << col << ','
          << (truth.event_date[p] ? truth.event_date[p]->to_string() : "")
          << ',' << fmt_g6(truth.pre_db[p]) << ',' << fmt_g6(truth.post_db[p])
          << '\n';
    }
  }
}

std::vector<Date> regular_dates(Date start, int count, int step_days) {
  std::vector<Date> dates;
  dates.reserve(count);
  for (int i = 0; i < count; ++i)
    dates.push_back(start.plus_days(static_cast<std::int64_t>(i) * step_days));
  return dates;
}

}  // namespace saralert
