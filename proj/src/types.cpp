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

#include "saralert/types.hpp"

#include <charconv>
#include <cstdio>

namespace saralert {

namespace {

// Days between 1970-01-01 and y-m-d in the proleptic Gregorian calendar
// (Howard Hinnant's civil-days algorithm).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

bool parse_int(std::string_view s, int& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

Date Date::parse(std::string_view iso) {
  int y = 0, m = 0, d = 0;
  bool ok = iso.size() == 10 && iso[4] == '-' && iso[7] == '-' &&
            parse_int(iso.substr(0, 4), y) && parse_int(iso.substr(5, 2), m) &&
            parse_int(iso.substr(8, 2), d);
  if (ok) ok = m >= 1 && m <= 12 && d >= 1 && d <= 31;
  if (!ok)
    throw DataError("invalid ISO-8601 date: '" + std::string(iso) + "'");
  return from_days(days_from_civil(y, static_cast<unsigned>(m),
                                   static_cast<unsigned>(d)));
}

std::string Date::to_string() const {
  std::int64_t y = 0;
  unsigned m = 0, d = 0;
  civil_from_days(days_, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02u",
                static_cast<long long>(y), m, d);
  return buf;
}

std::string unit_domain_name(UnitDomain u) {
  return u == UnitDomain::kLinearPower ? "linear-power" : "dB";
}

UnitDomain parse_unit_domain(std::string_view name) {
  if (name == "linear-power") return UnitDomain::kLinearPower;
  if (name == "dB" || name == "db") return UnitDomain::kDb;
  throw DataError("unknown unit_domain: '" + std::string(name) + "'");
}

int mirror_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  int k = i % period;
  if (k < 0) k += period;
  return k < n ? k : period - k;
}

}  // namespace saralert
