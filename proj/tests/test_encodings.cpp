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

#include <cmath>

#include "core/common.hpp"
#include "core/encodings.hpp"

using namespace sitsmon;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TEST_CASE("seasonal encoding matches sin/cos of the yearly angle") {
  for (int t : {1, 60, 182, 365}) {
    const auto [s, c] = seasonal_encoding(t);
    CHECK(s == doctest::Approx(std::sin(kTwoPi * t / 365.0)).epsilon(1e-12));
    CHECK(c == doctest::Approx(std::cos(kTwoPi * t / 365.0)).epsilon(1e-12));
    CHECK(s * s + c * c == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(seasonal_encoding(0), InvalidArgument);
  CHECK_THROWS_AS(seasonal_encoding(366), InvalidArgument);
}

TEST_CASE("seasonal encoding is nearly periodic across the year boundary") {
  const auto [s1, c1] = seasonal_encoding(1);
  const auto [s365, c365] = seasonal_encoding(365);
  CHECK(std::abs(s1 - s365) < 0.04);
  CHECK(std::abs(c1 - c365) < 0.04);
}

TEST_CASE("linear time encoding spans [0, 1]") {
  CHECK(linear_time_encoding(1) == doctest::Approx(0.0));
  CHECK(linear_time_encoding(365) == doctest::Approx(1.0));
  CHECK(linear_time_encoding(183) == doctest::Approx(0.5));
}

TEST_CASE("positional encoding normalizes by the patch-grid size") {
  const auto [pr, pc] = positional_encoding(3, 1, 4);
  CHECK(pr == doctest::Approx(0.75));
  CHECK(pc == doctest::Approx(0.25));
  CHECK_THROWS_AS(positional_encoding(4, 0, 4), InvalidArgument);
}

TEST_CASE("channel counts per mode") {
  CHECK(encoding_channel_count(EncodingMode::kFull) == 4);
  CHECK(encoding_channel_count(EncodingMode::kNoPosition) == 2);
  CHECK(encoding_channel_count(EncodingMode::kLinearTime) == 3);
  CHECK(encoding_channel_count(EncodingMode::kLinearTimeNoPosition) == 1);
}

TEST_CASE("conditioning values per mode") {
  const auto full = conditioning_values(100, 1, 2, 4, EncodingMode::kFull);
  REQUIRE(full.size() == 4);
  CHECK(full[0] == doctest::Approx(std::sin(kTwoPi * 100 / 365.0)));
  CHECK(full[2] == doctest::Approx(0.25));
  CHECK(full[3] == doctest::Approx(0.5));

  const auto lin = conditioning_values(100, 1, 2, 4, EncodingMode::kLinearTime);
  REQUIRE(lin.size() == 3);
  CHECK(lin[0] == doctest::Approx(99.0 / 364.0));

  const auto bare =
      conditioning_values(100, 1, 2, 4, EncodingMode::kLinearTimeNoPosition);
  REQUIRE(bare.size() == 1);

  // non-square grid normalizes each axis by its own count
  const auto rect = conditioning_values(10, 1, 3, 2, 4, EncodingMode::kFull);
  CHECK(rect[2] == doctest::Approx(0.5));
  CHECK(rect[3] == doctest::Approx(0.75));
}

TEST_CASE("constant planes broadcast each value") {
  const Tensor planes = constant_planes({0.25, -1.0}, 3);
  REQUIRE(planes.rank() == 3);
  CHECK(planes.dim(0) == 2);
  CHECK(planes.dim(1) == 3);
  for (int i = 0; i < 9; ++i) {
    CHECK(planes.data()[i] == 0.25f);
    CHECK(planes.data()[9 + i] == -1.0f);
  }
}

TEST_CASE("mode from flags") {
  CHECK(encoding_mode_from_flags(false, false) == EncodingMode::kFull);
  CHECK(encoding_mode_from_flags(true, false) == EncodingMode::kNoPosition);
  CHECK(encoding_mode_from_flags(false, true) == EncodingMode::kLinearTime);
  CHECK(encoding_mode_from_flags(true, true) == EncodingMode::kLinearTimeNoPosition);
}
