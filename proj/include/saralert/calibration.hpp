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

#ifndef SARALERT_CALIBRATION_HPP_
#define SARALERT_CALIBRATION_HPP_

#include <filesystem>

#include "saralert/stack.hpp"

namespace saralert {

/// Terrain description per pixel. Slope in [0, pi/2) radians; aspect is
/// the downhill direction in radians clockwise from north. Aspect is
/// meaningless where slope == 0 (the surface normal is vertical there).
struct TerrainGrid {
  Grid slope;
  Grid aspect;
};

/// Ellipsoid incidence angle (radians, per pixel) plus the ground-projected
/// sensor-to-target look direction in radians clockwise from north.
struct AcquisitionGeometry {
  Grid incidence;
  double look_azimuth = 0.0;

  static AcquisitionGeometry uniform(int width, int height,
                                     double incidence_rad,
                                     double look_azimuth_rad);
};

inline constexpr double kDefaultLiaMaxDeg = 78.0;

/// Angle between the terrain surface normal and the target-to-sensor
/// direction, per pixel, clamped into [0, pi/2). Flat pixels reproduce the
/// ellipsoid incidence exactly.
Grid local_incidence_angle(const TerrainGrid& terrain,
                           const AcquisitionGeometry& geom);

/// gamma0 = sigma0 / cos(lia), element-wise on linear-power values.
/// Pixels with lia >= lia_max_rad are masked to NaN (cos amplifies noise
/// toward grazing incidence).
Grid sigma0_to_gamma0(const Grid& sigma0, const Grid& lia,
                      double lia_max_rad);
RasterStack sigma0_to_gamma0(const RasterStack& stack, const Grid& lia,
                             double lia_max_rad);

enum class DbDirection { kToDb, kToLinear };

// 10*log10(x) / 10^(x/10). NaN passes through as no-data; finite
// non-positive input to kToDb throws DataError.
std::vector<double> db_convert(const std::vector<double>& values,
                               DbDirection dir);
Grid db_convert(const Grid& g, DbDirection dir);
RasterStack db_convert(const RasterStack& stack, DbDirection dir);
TimeSeries db_convert(const TimeSeries& ts, DbDirection dir);

/// Terrain directory: meta.json (width, height) + slope.raw + aspect.raw
/// in the shared float32 raster format.
TerrainGrid load_terrain(const std::filesystem::path& dir);
void write_terrain(const TerrainGrid& terrain,
                   const std::filesystem::path& dir);

}  // namespace saralert

#endif  // SARALERT_CALIBRATION_HPP_
