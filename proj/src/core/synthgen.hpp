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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "core/dates.hpp"
#include "core/sits.hpp"
#include "core/tensor.hpp"

namespace sitsmon {

enum class HazardKind { kAbruptBlob, kGradualGrowth, kOutOfSeasonShift };

HazardKind hazard_kind_from_name(const std::string& name);
std::string hazard_kind_name(HazardKind kind);

struct HazardSpec {
  HazardKind kind = HazardKind::kAbruptBlob;
  Date onset;
  // Abrupt / out-of-season: active for [onset, onset + duration_days).
  // Gradual: footprint area grows linearly from zero to the full disk over
  // duration_days, then stays active at full size.
  int duration_days = 60;
  int center_row = 0;
  int center_col = 0;
  int radius = 13;  // full-size disk radius, pixels
  double magnitude = 0.45;
};

struct SceneConfig {
  int height = 128;
  int width = 128;
  int channels = 10;
  int n_land_classes = 4;
  double seasonal_amp = 0.15;
  double noise_sigma = 0.005;
  // Extra noise std applied with a yearly cycle peaking on Jan 1; used to
  // make reconstruction difficulty genuinely seasonal.
  double noise_seasonal = 0.0;
  int cadence_days = 10;
  int train_years = 3;
  int test_years = 1;
  int start_year = 2017;
  int patch = 32;
  std::uint64_t seed = 42;
  std::vector<HazardSpec> hazards;

  void validate() const;
  Date train_start() const { return {start_year, 1, 1}; }
  Date test_start() const { return {start_year + train_years, 1, 1}; }
  Date test_end() const { return {start_year + train_years + test_years, 1, 1}; }
};

// Deterministic land-cover model: Voronoi land classes with per-class,
// per-channel base reflectance and a per-class seasonal phase.
class SceneModel {
 public:
  explicit SceneModel(const SceneConfig& config);

  const SceneConfig& config() const { return config_; }

  // Closed-form noise- and hazard-free image for a date.
  Tensor expected_image(const Date& date) const;

  double noise_sigma_at(const Date& date) const;

  // Applies `spec` to `image` in place if active at `date`; returns the
  // effective HxW 0/1 mask (pixels actually altered). Inactive hazards
  // leave the image unchanged and return an empty (all-zero) mask.
  Tensor inject_hazard(Tensor& image, const HazardSpec& spec,
                       const Date& date) const;

  int land_class(int row, int col) const {
    return class_map_[static_cast<std::size_t>(row) * config_.width + col];
  }

 private:
  double seasonal_term(int cls, int doy_shifted) const;

  SceneConfig config_;
  std::vector<int> class_map_;                  // HxW
  std::vector<std::vector<double>> base_;       // class x channel
  std::vector<double> phase_;                   // class
  std::vector<std::vector<std::size_t>> disk_;  // per hazard: pixels by distance
};

struct SceneData {
  SitsDataset train;
  SitsDataset test;
  std::vector<std::pair<Date, bool>> labels;  // test images
  std::vector<Tensor> test_masks;             // HxW per test image
};

SceneData generate_scene(const SceneConfig& config);

// Writes train/, test/, labels.csv and masks/ in the layout the ingestion
// side reads back.
void write_scene(const SceneConfig& config, const std::string& out_dir);

}  // namespace sitsmon
