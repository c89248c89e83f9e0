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
#include "core/config.hpp"

using namespace sitsmon;

TEST_CASE("config parses sections, scalars and comments") {
  const char* text = R"(
# run settings
seed = 7

[paths]
data_dir = "scene"   # quoted string

[train]
epochs = 5
lr_init = 2e-4
widths = [8, 16, 32]

[ablation]
mae_score = true
)";
  ConfigMap m = ConfigMap::parse_text(text);
  CHECK(m.get_int("seed", 0) == 7);
  CHECK(m.get_string("paths.data_dir", "") == "scene");
  CHECK(m.get_int("train.epochs", 0) == 5);
  CHECK(m.get_double("train.lr_init", 0.0) == doctest::Approx(2e-4));
  CHECK(m.get_bool("ablation.mae_score", false));
  const auto widths = m.get_int_list("train.widths", {});
  REQUIRE(widths.size() == 3);
  CHECK(widths[1] == 16);
}

TEST_CASE("config rejects malformed lines") {
  CHECK_THROWS_AS(ConfigMap::parse_text("[broken\n"), InvalidArgument);
  CHECK_THROWS_AS(ConfigMap::parse_text("just a line\n"), InvalidArgument);
  CHECK_THROWS_AS(ConfigMap::parse_text("key =\n"), InvalidArgument);
  ConfigMap m = ConfigMap::parse_text("x = abc\n");
  CHECK_THROWS_AS(m.get_int("x", 0), InvalidArgument);
  CHECK_THROWS_AS(m.get_bool("x", false), InvalidArgument);
}

TEST_CASE("overrides replace file values") {
  ConfigMap m = ConfigMap::parse_text("[train]\nepochs = 5\n");
  m.set_override("train.epochs=9");
  m.set_override("seed=123");
  CHECK(m.get_int("train.epochs", 0) == 9);
  CHECK(m.get_int("seed", 0) == 123);
  CHECK_THROWS_AS(m.set_override("no_equals"), InvalidArgument);
}

TEST_CASE("run config defaults and round trip") {
  RunConfig c = RunConfig::load("", {});
  CHECK(c.channels == 10);
  CHECK(c.patch == 32);
  CHECK(c.train.epochs == 20);
  CHECK(c.train.batch_size == 32);
  CHECK(c.widths[2] == 128);
  CHECK(c.encoding_mode() == EncodingMode::kFull);

  // Serialized config parses back to the same values.
  RunConfig c2 = RunConfig::from_map(ConfigMap::parse_text(c.to_toml()));
  CHECK(c2.to_toml() == c.to_toml());
}

TEST_CASE("ablation flags select the encoding mode") {
  RunConfig c = RunConfig::load("", {"ablation.no_position=true"});
  CHECK(c.encoding_mode() == EncodingMode::kNoPosition);
  c = RunConfig::load("", {"ablation.linear_time=true"});
  CHECK(c.encoding_mode() == EncodingMode::kLinearTime);
  c = RunConfig::load("", {"ablation.linear_time=true", "ablation.no_position=true"});
  CHECK(c.encoding_mode() == EncodingMode::kLinearTimeNoPosition);
}

TEST_CASE("run config validation") {
  CHECK_THROWS_AS(RunConfig::load("", {"data.val_fraction=1.5"}), InvalidArgument);
  CHECK_THROWS_AS(RunConfig::load("", {"train.widths=[4, 8]"}), InvalidArgument);
  CHECK_THROWS_AS(RunConfig::load("", {"synth.hazards=\"sometimes\""}), InvalidArgument);
}
