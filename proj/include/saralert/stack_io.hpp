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

#ifndef SARALERT_STACK_IO_HPP_
#define SARALERT_STACK_IO_HPP_

#include <filesystem>

#include "saralert/stack.hpp"

namespace saralert {

// Stack directory layout:
//   meta.json                width, height, bands, dates, unit_domain,
//                            optional geotransform
//   <date>_<band>.raw        float32 little-endian, row-major, one file
//                            per (date, band)
//
// NaN is the explicit no-data value in both unit domains. +/-inf is
// rejected, as are negative finite values in linear-power mode.

RasterStack load_stack(const std::filesystem::path& dir);
void write_stack(const RasterStack& stack, const std::filesystem::path& dir);

// Sample CSV: header `row,col,class,reference_date`; class is
// invariant-forest or cleared-forest; reference_date must be empty for
// forest rows and present for cleared rows.
SampleSet load_sample_set(const std::filesystem::path& csv);
void write_sample_set(const SampleSet& set, const std::filesystem::path& csv);

/// Per-location time series in stack date order; unit domain propagated.
/// Throws DataError for out-of-bounds locations or unknown bands.
TimeSeries extract_series(const RasterStack& stack, int row, int col,
                          const std::string& band);

// Single rasters in the same float32 format (terrain layers, baselines).
Grid load_raster(const std::filesystem::path& file, int width, int height);
void write_raster(const Grid& g, const std::filesystem::path& file);

}  // namespace saralert

#endif  // SARALERT_STACK_IO_HPP_
