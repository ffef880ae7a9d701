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

#include "saralert/stack_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

static_assert(std::endian::native == std::endian::little,
              "raster files are float32 little-endian; big-endian hosts "
              "would need byte swapping");
static_assert(sizeof(float) == 4);

namespace saralert {

namespace {

using json = nlohmann::ordered_json;

json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("cannot open " + p.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("malformed JSON in " + p.string() + ": " + e.what());
  }
  return j;
}

std::string raster_name(const Date& date, const std::string& band) {
  return date.to_string() + "_" + band + ".raw";
}

std::vector<float> read_floats(const std::filesystem::path& file,
                               std::size_t expected) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open raster " + file.string());
  std::vector<float> buf(expected);
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(expected * sizeof(float)));
  if (static_cast<std::size_t>(in.gcount()) != expected * sizeof(float))
    throw DataError("raster size mismatch in " + file.string() +
                    " (expected " + std::to_string(expected * sizeof(float)) +
                    " bytes)");
  in.get();
  if (!in.eof())
    throw DataError("raster size mismatch in " + file.string() +
                    " (file larger than declared extent)");
  return buf;
}

void write_floats(const std::filesystem::path& file,
                  std::span<const double> values) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write raster " + file.string());
  std::vector<float> buf(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    buf[i] = static_cast<float>(values[i]);
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!out) throw IoError("short write to " + file.string());
}

void check_slice_values(std::span<const double> v, UnitDomain unit,
                        const std::string& file) {
  for (double x : v) {
    if (std::isnan(x)) continue;
    if (std::isinf(x))
      throw DataError("non-finite value in " + file);
    if (unit == UnitDomain::kLinearPower && x < 0.0)
      throw DataError("negative linear-power value in " + file);
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

RasterStack load_stack(const std::filesystem::path& dir) {
  const auto meta_path = dir / "meta.json";
  if (!std::filesystem::exists(meta_path))
    throw IoError("missing stack metadata " + meta_path.string());
  json meta = read_json_file(meta_path);

  RasterStack s;
  try {
    s.width = meta.at("width").get<int>();
    s.height = meta.at("height").get<int>();
    s.bands = meta.at("bands").get<std::vector<std::string>>();
    for (const auto& d : meta.at("dates"))
      s.dates.push_back(Date::parse(d.get<std::string>()));
    s.unit = parse_unit_domain(meta.at("unit_domain").get<std::string>());
    if (meta.contains("geotransform")) {
      auto gt = meta.at("geotransform").get<std::vector<double>>();
      if (gt.size() != 6)
        throw DataError("geotransform must have 6 values");
      std::array<double, 6> a{};
      std::copy(gt.begin(), gt.end(), a.begin());
      s.geotransform = a;
    }
  } catch (const json::exception& e) {
    throw DataError("malformed stack metadata in " + meta_path.string() +
                    ": " + e.what());
  }
  if (s.width <= 0 || s.height <= 0)
    throw DataError("stack metadata declares empty extent");

  // Count .raw slices up front so a missing file reports as a count
  // mismatch rather than a bare open failure.
  std::size_t present = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".raw") ++present;
  const std::size_t wanted = s.dates.size() * s.bands.size();
  if (present != wanted)
    throw DataError("slice count mismatch in " + dir.string() + ": metadata "
                    "declares " + std::to_string(wanted) + " rasters, found " +
                    std::to_string(present));

  s.pixels.resize(wanted * s.slice_size());
  for (std::size_t d = 0; d < s.dates.size(); ++d) {
    for (std::size_t b = 0; b < s.bands.size(); ++b) {
      const auto file = dir / raster_name(s.dates[d], s.bands[b]);
      auto buf = read_floats(file, s.slice_size());
      auto out = s.slice(static_cast<int>(d), static_cast<int>(b));
      for (std::size_t i = 0; i < buf.size(); ++i)
        out[i] = static_cast<double>(buf[i]);
      check_slice_values(out, s.unit, file.string());
    }
  }
  s.validate();
  return s;
}

void write_stack(const RasterStack& stack, const std::filesystem::path& dir) {
  stack.validate();
  std::filesystem::create_directories(dir);

  json meta;
  meta["width"] = stack.width;
  meta["height"] = stack.height;
  meta["bands"] = stack.bands;
  json dates = json::array();
  for (const auto& d : stack.dates) dates.push_back(d.to_string());
  meta["dates"] = dates;
  meta["unit_domain"] = unit_domain_name(stack.unit);
  if (stack.geotransform)
    meta["geotransform"] = std::vector<double>(stack.geotransform->begin(),
                                               stack.geotransform->end());

  std::ofstream out(dir / "meta.json", std::ios::trunc);
  if (!out) throw IoError("cannot write " + (dir / "meta.json").string());
  out << meta.dump(2) << "\n";

  for (std::size_t d = 0; d < stack.dates.size(); ++d)
    for (std::size_t b = 0; b < stack.bands.size(); ++b)
      write_floats(dir / raster_name(stack.dates[d], stack.bands[b]),
                   stack.slice(static_cast<int>(d), static_cast<int>(b)));
}

SampleSet load_sample_set(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  if (!in) throw IoError("cannot open sample set " + csv.string());
  std::string line;
  if (!std::getline(in, line))
    throw DataError("empty sample set " + csv.string());
  if (split_csv_line(line) !=
      std::vector<std::string>{"row", "col", "class", "reference_date"})
    throw DataError("bad sample CSV header in " + csv.string() +
                    " (expected row,col,class,reference_date)");

  SampleSet set;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 4)
      throw DataError("bad sample row at " + csv.string() + ":" +
                      std::to_string(line_no));
    SampleLocation loc;
    try {
      loc.row = std::stoi(f[0]);
      loc.col = std::stoi(f[1]);
    } catch (const std::exception&) {
      throw DataError("bad coordinates at " + csv.string() + ":" +
                      std::to_string(line_no));
    }
    loc.cls = parse_sample_class(f[2]);
    if (!f[3].empty()) loc.reference_date = Date::parse(f[3]);
    if (loc.cls == SampleClass::kClearedForest && !loc.reference_date)
      throw DataError("cleared-forest row missing reference_date at " +
                      csv.string() + ":" + std::to_string(line_no));
    if (loc.cls == SampleClass::kInvariantForest && loc.reference_date)
      throw DataError("invariant-forest row must not carry a reference_date "
                      "at " + csv.string() + ":" + std::to_string(line_no));
    set.locations.push_back(std::move(loc));
  }
  return set;
}

void write_sample_set(const SampleSet& set, const std::filesystem::path& csv) {
  std::ofstream out(csv, std::ios::trunc);
  if (!out) throw IoError("cannot write sample set " + csv.string());
  out << "row,col,class,reference_date\n";
  for (const auto& l : set.locations) {
    out << l.row << ',' << l.col << ',' << sample_class_name(l.cls) << ','
        << (l.reference_date ? l.reference_date->to_string() : "") << '\n';
  }
}

TimeSeries extract_series(const RasterStack& stack, int row, int col,
                          const std::string& band) {
  if (row < 0 || row >= stack.height || col < 0 || col >= stack.width)
    throw DataError("series location (" + std::to_string(row) + "," +
                    std::to_string(col) + ") out of bounds");
  const int b = stack.band_index(band);
  if (b < 0) throw DataError("unknown band '" + band + "'");

  TimeSeries ts;
  ts.dates = stack.dates;
  ts.band = band;
  ts.row = row;
  ts.col = col;
  ts.unit = stack.unit;
  ts.values.reserve(stack.dates.size());
  const std::size_t off = static_cast<std::size_t>(row) * stack.width + col;
  for (std::size_t d = 0; d < stack.dates.size(); ++d)
    ts.values.push_back(stack.slice(static_cast<int>(d), b)[off]);
  return ts;
}

Grid load_raster(const std::filesystem::path& file, int width, int height) {
  Grid g(width, height);
  auto buf = read_floats(file, g.size());
  for (std::size_t i = 0; i < buf.size(); ++i)
    g.data[i] = static_cast<double>(buf[i]);
  return g;
}

void write_raster(const Grid& g, const std::filesystem::path& file) {
  write_floats(file, g.data);
}

}  // namespace saralert
