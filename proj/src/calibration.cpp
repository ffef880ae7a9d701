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

#include "saralert/calibration.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "saralert/kernels.hpp"
#include "saralert/parallel.hpp"
#include "saralert/stack_io.hpp"

namespace saralert {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}  // namespace

AcquisitionGeometry AcquisitionGeometry::uniform(int width, int height,
                                                 double incidence_rad,
                                                 double look_azimuth_rad) {
  AcquisitionGeometry g;
  g.incidence = Grid(width, height, incidence_rad);
  g.look_azimuth = look_azimuth_rad;
  return g;
}

Grid local_incidence_angle(const TerrainGrid& terrain,
                           const AcquisitionGeometry& geom) {
  const Grid& slope = terrain.slope;
  const Grid& aspect = terrain.aspect;
  if (!slope.same_shape(aspect) || !slope.same_shape(geom.incidence))
    throw DataError("terrain/geometry grids are not co-registered");

  // Unit vector from target toward the sensor: elevation pi/2 - theta,
  // ground azimuth opposite the look direction.
  const double az_to_sensor = geom.look_azimuth + kPi;
  const double lia_ceiling = std::nextafter(kPi / 2.0, 0.0);

  Grid lia(slope.width, slope.height);
  parallel_chunks(static_cast<std::size_t>(slope.height), [&](std::size_t r0,
                                                              std::size_t r1) {
    for (std::size_t r = r0; r < r1; ++r) {
      for (int c = 0; c < slope.width; ++c) {
        const int row = static_cast<int>(r);
        const double theta = geom.incidence.at(row, c);
        if (!(theta > 0.0) || !(theta < kPi / 2.0))
          throw DataError("incidence angle out of (0, pi/2)");
        const double s = slope.at(row, c);
        if (!(s >= 0.0) || s >= kPi / 2.0)
          throw DataError("slope out of [0, pi/2)");
        if (s == 0.0) {
          // Vertical normal; aspect undefined and unused.
          lia.at(row, c) = theta;
          continue;
        }
        const double a = aspect.at(row, c);
        // n = (sin s sin a, sin s cos a, cos s), east/north/up;
        // r = (sin theta sin az, sin theta cos az, cos theta).
        const double dot = std::sin(s) * std::sin(theta) *
                               std::cos(a - az_to_sensor) +
                           std::cos(s) * std::cos(theta);
        double angle = std::acos(std::clamp(dot, -1.0, 1.0));
        lia.at(row, c) = std::min(angle, lia_ceiling);
      }
    }
  });
  return lia;
}

Grid sigma0_to_gamma0(const Grid& sigma0, const Grid& lia,
                      double lia_max_rad) {
  if (!sigma0.same_shape(lia))
    throw DataError("sigma0 and LIA grids are not co-registered");
  std::vector<double> cos_lia(lia.size());
  for (std::size_t i = 0; i < lia.size(); ++i)
    cos_lia[i] = std::cos(lia.data[i]);
  // lia >= lia_max  <=>  cos(lia) <= cos(lia_max) on [0, pi/2)
  const double cos_floor = std::cos(lia_max_rad);

  Grid out(sigma0.width, sigma0.height);
  kernels::active().cos_ratio(out.data.data(), sigma0.data.data(),
                              cos_lia.data(), cos_floor, out.size());
  return out;
}

RasterStack sigma0_to_gamma0(const RasterStack& stack, const Grid& lia,
                             double lia_max_rad) {
  if (stack.unit != UnitDomain::kLinearPower)
    throw DataError("gamma0 conversion expects a linear-power stack");
  if (lia.width != stack.width || lia.height != stack.height)
    throw DataError("LIA grid does not match stack extent");

  std::vector<double> cos_lia(lia.size());
  for (std::size_t i = 0; i < lia.size(); ++i)
    cos_lia[i] = std::cos(lia.data[i]);
  const double cos_floor = std::cos(lia_max_rad);

  RasterStack out = stack;
  const std::size_t slices = stack.dates.size() * stack.bands.size();
  parallel_chunks(slices, [&](std::size_t s0, std::size_t s1) {
    for (std::size_t s = s0; s < s1; ++s) {
      double* dst = out.pixels.data() + s * out.slice_size();
      const double* src = stack.pixels.data() + s * stack.slice_size();
      kernels::active().cos_ratio(dst, src, cos_lia.data(), cos_floor,
                                  stack.slice_size());
    }
  });
  return out;
}

namespace {

double to_db_value(double x) {
  if (std::isnan(x)) return kNan;
  if (!(x > 0.0))
    throw DataError("dB conversion requires strictly positive values (got " +
                    std::to_string(x) + ")");
  return 10.0 * std::log10(x);
}

double to_linear_value(double x) {
  if (std::isnan(x)) return kNan;
  return std::pow(10.0, x / 10.0);
}

}  // namespace

std::vector<double> db_convert(const std::vector<double>& values,
                               DbDirection dir) {
  std::vector<double> out(values.size());
  if (dir == DbDirection::kToDb) {
    for (std::size_t i = 0; i < values.size(); ++i)
      out[i] = to_db_value(values[i]);
  } else {
    for (std::size_t i = 0; i < values.size(); ++i)
      out[i] = to_linear_value(values[i]);
  }
  return out;
}

Grid db_convert(const Grid& g, DbDirection dir) {
  Grid out(g.width, g.height);
  out.data = db_convert(g.data, dir);
  return out;
}

RasterStack db_convert(const RasterStack& stack, DbDirection dir) {
  if (dir == DbDirection::kToDb && stack.unit == UnitDomain::kDb)
    throw DataError("stack is already in dB");
  if (dir == DbDirection::kToLinear && stack.unit == UnitDomain::kLinearPower)
    throw DataError("stack is already in linear power");
  RasterStack out = stack;
  out.pixels = db_convert(stack.pixels, dir);
  out.unit = dir == DbDirection::kToDb ? UnitDomain::kDb
                                       : UnitDomain::kLinearPower;
  return out;
}

TimeSeries db_convert(const TimeSeries& ts, DbDirection dir) {
  TimeSeries out = ts;
  out.values = db_convert(ts.values, dir);
  out.unit = dir == DbDirection::kToDb ? UnitDomain::kDb
                                       : UnitDomain::kLinearPower;
  return out;
}

TerrainGrid load_terrain(const std::filesystem::path& dir) {
  std::ifstream in(dir / "meta.json");
  if (!in) throw IoError("cannot open " + (dir / "meta.json").string());
  nlohmann::json meta;
  try {
    in >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed terrain metadata: " + std::string(e.what()));
  }
  const int w = meta.at("width").get<int>();
  const int h = meta.at("height").get<int>();
  TerrainGrid t;
  t.slope = load_raster(dir / "slope.raw", w, h);
  t.aspect = load_raster(dir / "aspect.raw", w, h);
  return t;
}

void write_terrain(const TerrainGrid& terrain,
                   const std::filesystem::path& dir) {
  if (!terrain.slope.same_shape(terrain.aspect))
    throw DataError("slope/aspect shape mismatch");
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json meta;
  meta["width"] = terrain.slope.width;
  meta["height"] = terrain.slope.height;
  std::ofstream out(dir / "meta.json", std::ios::trunc);
  if (!out) throw IoError("cannot write " + (dir / "meta.json").string());
  out << meta.dump(2) << "\n";
  write_raster(terrain.slope, dir / "slope.raw");
  write_raster(terrain.aspect, dir / "aspect.raw");
}

}  // namespace saralert
