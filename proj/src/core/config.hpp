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

#include <map>
#include <string>
#include <vector>

#include "core/encodings.hpp"
#include "core/scoring.hpp"
#include "core/siu_net.hpp"
#include "core/synthgen.hpp"

namespace sitsmon {

// Flat key/value view of a TOML-style config file. Values keep their source
// text; typed accessors parse on demand. Keys are "section.name" (or bare
// names for top-level entries).
class ConfigMap {
 public:
  static ConfigMap parse_file(const std::string& path);
  static ConfigMap parse_text(const std::string& text);

  // Applies a "key=value" override (same dotted-key convention).
  void set_override(const std::string& assignment);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<long long> get_int_list(const std::string& key,
                                      const std::vector<long long>& fallback) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;  // key -> raw value text
};

// Fully resolved run configuration shared by every pipeline command.
struct RunConfig {
  std::string data_dir = "data";
  std::string artifact_dir = "artifacts";

  int channels = 10;
  int patch = 32;
  bool per_channel_norm = false;
  std::vector<int> band_order;  // empty = keep file order
  double val_fraction = 0.1;

  std::vector<int> widths = {32, 64, 128};
  TrainHyperparams train;

  SsimParams ssim;
  double threshold_multiplier = 1.64;

  // Ablation switches.
  bool no_position = false;
  bool linear_time = false;
  bool mae_score = false;
  bool flat_threshold = false;

  SceneConfig synth;
  std::string synth_hazards = "default";  // "default" | "none"

  static RunConfig from_map(const ConfigMap& map);
  static RunConfig load(const std::string& path,
                        const std::vector<std::string>& overrides);

  void validate() const;
  EncodingMode encoding_mode() const;

  // Serialized back out so each run records the settings it actually used.
  std::string to_toml() const;
};

}  // namespace sitsmon
