// Copyright 2026 The sitsmon authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/dates.hpp"

#include <array>
#include <cctype>
#include <cstdio>

#include "core/common.hpp"

namespace sitsmon {

namespace {

constexpr std::array<int, 12> kMonthDays = {31, 28, 31, 30, 31, 30,
                                            31, 31, 30, 31, 30, 31};

int days_in_month(int year, int month) {
  if (month == 2 && is_leap_year(year)) return 29;
  return kMonthDays[static_cast<std::size_t>(month - 1)];
}

}  // namespace

bool is_leap_year(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int day_of_year(const Date& d) {
  int doy = d.day;
  for (int m = 1; m < d.month; ++m) doy += days_in_month(d.year, m);
  return doy;
}

int encoding_day(const Date& d) {
  int doy = day_of_year(d);
  return doy > 365 ? 365 : doy;
}

int mid_month_day(int month) {
  if (month < 1 || month > 12) throw InvalidArgument("mid_month_day: month out of range");
  int doy = 15;
  for (int m = 1; m < month; ++m) doy += kMonthDays[static_cast<std::size_t>(m - 1)];
  return doy;
}

Date parse_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-')
    throw InvalidArgument("not an ISO date: '" + s + "'");
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw InvalidArgument("not an ISO date: '" + s + "'");
  }
  Date d;
  d.year = std::stoi(s.substr(0, 4));
  d.month = std::stoi(s.substr(5, 2));
  d.day = std::stoi(s.substr(8, 2));
  if (d.month < 1 || d.month > 12 || d.day < 1 ||
      d.day > days_in_month(d.year, d.month))
    throw InvalidArgument("invalid calendar date: '" + s + "'");
  return d;
}

std::string to_iso_string(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

bool find_date_in_filename(const std::string& name, Date* out) {
  if (name.size() < 10) return false;
  for (std::size_t i = 0; i + 10 <= name.size(); ++i) {
    if (name[i + 4] != '-' || name[i + 7] != '-') continue;
    try {
      *out = parse_iso_date(name.substr(i, 10));
      return true;
    } catch (const InvalidArgument&) {
      continue;
    }
  }
  return false;
}

long long days_from_civil(const Date& d) {
  // Howard Hinnant's civil-days algorithm.
  long long y = d.year;
  const int m = d.month;
  const int dd = d.day;
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 +
                       static_cast<unsigned>(dd) - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

Date civil_from_days(long long z) {
  z += 719468;
  const long long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const long long y = static_cast<long long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned dd = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m),
              static_cast<int>(dd)};
}

}  // namespace sitsmon
