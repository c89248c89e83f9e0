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

#include <doctest.h>

#include "core/common.hpp"
#include "core/dates.hpp"

using namespace sitsmon;

TEST_CASE("day_of_year basics") {
  CHECK(day_of_year({2021, 1, 1}) == 1);
  CHECK(day_of_year({2021, 12, 31}) == 365);
  CHECK(day_of_year({2020, 12, 31}) == 366);  // leap year
  CHECK(day_of_year({2020, 3, 1}) == 61);
  CHECK(day_of_year({2021, 3, 1}) == 60);
}

TEST_CASE("encoding_day folds leap day 366 onto 365") {
  CHECK(encoding_day({2020, 12, 31}) == 365);
  CHECK(encoding_day({2021, 12, 31}) == 365);
  CHECK(encoding_day({2020, 2, 29}) == 60);
}

TEST_CASE("iso date round trip") {
  const Date d = parse_iso_date("2019-07-04");
  CHECK(d.year == 2019);
  CHECK(d.month == 7);
  CHECK(d.day == 4);
  CHECK(to_iso_string(d) == "2019-07-04");
}

TEST_CASE("parse_iso_date rejects malformed input") {
  CHECK_THROWS_AS(parse_iso_date("2019-7-04"), InvalidArgument);
  CHECK_THROWS_AS(parse_iso_date("2019-13-01"), InvalidArgument);
  CHECK_THROWS_AS(parse_iso_date("2019-02-30"), InvalidArgument);
  CHECK_THROWS_AS(parse_iso_date("20190704"), InvalidArgument);
  CHECK_THROWS_AS(parse_iso_date("2019-07-04x"), InvalidArgument);
}

TEST_CASE("find_date_in_filename") {
  Date d;
  CHECK(find_date_in_filename("roi_2018-03-15.tif", &d));
  CHECK(to_iso_string(d) == "2018-03-15");
  CHECK(find_date_in_filename("s2_scene_2020-02-29.tiff", &d));
  CHECK(!find_date_in_filename("scene_nodate.tif", &d));
  CHECK(!find_date_in_filename("scene_2020-19-99.tif", &d));
}

TEST_CASE("civil day arithmetic round trips") {
  for (long long z : {-1000LL, 0LL, 737000LL, 738000LL}) {
    CHECK(days_from_civil(civil_from_days(z)) == z);
  }
  const long long a = days_from_civil({2019, 12, 31});
  CHECK(civil_from_days(a + 1).year == 2020);
  CHECK(civil_from_days(a + 1).month == 1);
}

TEST_CASE("mid_month_day uses a fixed 365-day calendar") {
  CHECK(mid_month_day(1) == 15);
  CHECK(mid_month_day(2) == 46);
  CHECK(mid_month_day(12) == 349);
}
