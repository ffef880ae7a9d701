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

#ifndef SARALERT_UTIL_HPP_
#define SARALERT_UTIL_HPP_

#include <cstdio>
#include <string>

namespace saralert {

/// Fixed 6-significant-digit float formatting. Every CSV/JSON artifact
/// goes through this so re-runs with the same config and seed are
/// byte-identical.
inline std::string fmt_g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace saralert

#endif  // SARALERT_UTIL_HPP_
