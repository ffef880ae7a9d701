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

#ifndef SARALERT_SYNTH_HPP_
#define SARALERT_SYNTH_HPP_

#include <cstdint>
#include <filesystem>

#include "saralert/stack.hpp"

namespace saralert {

/// Counter-based random stream: a SplitMix64 sequence whose initial state
/// is a hash of (seed, key words). Every scene cell derives its own
/// stream, so generation order and thread count cannot change the output.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t s) : state(s) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform in (0, 1), never exactly 0 or 1.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }
  /// Standard normal via Box-Muller.
  double next_normal();
  /// Gamma(shape, scale 1) via Marsaglia-Tsang; any shape > 0.
  double next_gamma(double shape);
};

/// Hash of a seed plus key words into a stream state.
std::uint64_t derive_stream(std::uint64_t seed,
                            std::initializer_list<std::uint64_t> keys);

/// Axis-aligned clearcut event: drop_db is applied from date onward to
/// every pixel of the rectangle.
struct EventRect {
  int row0 = 0;
  int col0 = 0;
  int height = 0;
  int width = 0;
  Date date;
  double drop_db = 3.0;
};

/// Scene model: per pixel/date the true dB level is
///   forest_mean_db + N(0, forest_sigma_db) - (event drop if active)
/// and the emitted linear-power value is 10^(level/10) * G with
/// G ~ Gamma(looks, 1/looks) (unit mean). Temporal fluctuation and
/// speckle are separate so the normal-in-dB forest model is true by
/// construction at high looks and stressable at low looks.
struct SceneConfig {
  int width = 200;
  int height = 200;
  std::vector<Date> dates;
  std::vector<std::string> bands{"VV"};
  std::vector<double> forest_mean_db{-7.0};
  std::vector<double> forest_sigma_db{0.51};
  double looks = 4.7;
  std::vector<EventRect> events;
  std::uint64_t seed = 0;
  int forest_samples = 50;
  int cleared_samples = 50;
  int sample_margin = 8;   // forest samples keep this distance from events
  int cleared_inset = 2;   // cleared samples stay this far inside an event

  void validate() const;
};

struct SceneTruth {
  int width = 0;
  int height = 0;
  std::vector<std::optional<Date>> event_date;  // per pixel
  std::vector<double> pre_db;                   // first band
  std::vector<double> post_db;
};

struct SceneResult {
  RasterStack stack;
  SceneTruth truth;
  SampleSet forest;   // invariant-forest, outside all events
  SampleSet cleared;  // inside events, reference_date = event date
};

/// Deterministic for a given config (bit-identical across runs and thread
/// counts). Emitted pixels are quantized to float32 so a write/load round
/// trip reproduces them exactly.
SceneResult generate_scene(const SceneConfig& config);

/// CSV: row,col,event_date,pre_db,post_db (event_date empty for no-event
/// pixels).
void write_truth_csv(const SceneTruth& truth,
                     const std::filesystem::path& csv);

/// Evenly spaced acquisition dates, `count` of them, `step_days` apart.
std::vector<Date> regular_dates(Date start, int count, int step_days);

}  // namespace saralert

#endif  // SARALERT_SYNTH_HPP_
