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

#pragma once

#include <compare>
#include <string>

namespace sitsmon {

struct Date {
  int year = 0;
  int month = 0;  // 1..12
  int day = 0;    // 1..31

  auto operator<=>(const Date&) const = default;
};

bool is_leap_year(int year);

// Day of year in [1, 366].
int day_of_year(const Date& d);

// Day of year capped to 365: the seasonal encodings divide by 365, so
// Dec 31 of a leap year maps onto day 365.
int encoding_day(const Date& d);

// Day of year of the 15th of `month` in a 365-day calendar; anchor for the
// monthly std regression.
int mid_month_day(int month);

// Parses strict ISO "YYYY-MM-DD"; throws InvalidArgument on anything else.
Date parse_iso_date(const std::string& s);

std::string to_iso_string(const Date& d);

// Extracts an ISO date embedded in a filename such as "roi_2017-01-03.tif".
// Returns false if no valid date is present.
bool find_date_in_filename(const std::string& name, Date* out);

// Days since 1970-01-01 (proleptic Gregorian); used for date arithmetic.
long long days_from_civil(const Date& d);
Date civil_from_days(long long z);

}  // namespace sitsmon
