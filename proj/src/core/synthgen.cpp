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

#include "core/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "core/raster_io.hpp"
#include "core/rng.hpp"

namespace fs = std::filesystem;

namespace sitsmon {

namespace {

constexpr double kHalfYear = 182.5;

double disk_area(int radius) { return M_PI * radius * radius; }

}  // namespace

HazardKind hazard_kind_from_name(const std::string& name) {
  if (name == "abrupt_blob") return HazardKind::kAbruptBlob;
  if (name == "gradual_growth") return HazardKind::kGradualGrowth;
  if (name == "out_of_season_shift") return HazardKind::kOutOfSeasonShift;
  throw InvalidArgument("unknown hazard kind: " + name);
}

std::string hazard_kind_name(HazardKind kind) {
  switch (kind) {
    case HazardKind::kAbruptBlob: return "abrupt_blob";
    case HazardKind::kGradualGrowth: return "gradual_growth";
    case HazardKind::kOutOfSeasonShift: return "out_of_season_shift";
  }
  throw InvalidArgument("unknown hazard kind");
}

void SceneConfig::validate() const {
  if (height % patch != 0 || width % patch != 0)
    throw InvalidArgument("scene: dimensions must be divisible by " +
                          std::to_string(patch));
  if (channels < 1 || n_land_classes < 1)
    throw InvalidArgument("scene: channels and land classes must be positive");
  if (seasonal_amp < 0.0 || noise_sigma < 0.0 || noise_seasonal < 0.0)
    throw InvalidArgument("scene: amplitudes must be >= 0");
  if (cadence_days < 1 || train_years < 1 || test_years < 1)
    throw InvalidArgument("scene: cadence and year counts must be positive");
  for (const auto& hz : hazards) {
    if (hz.center_row - hz.radius < 0 || hz.center_row + hz.radius >= height ||
        hz.center_col - hz.radius < 0 || hz.center_col + hz.radius >= width)
      throw InvalidArgument("scene: hazard footprint out of bounds");
    if (hz.duration_days < 1) throw InvalidArgument("scene: hazard duration < 1");
  }
}

SceneModel::SceneModel(const SceneConfig& config) : config_(config) {
  config_.validate();
  Rng rng(config_.seed);

  // Voronoi land classes from seeded cell centers.
  std::vector<std::pair<double, double>> centers;
  for (int k = 0; k < config_.n_land_classes; ++k)
    centers.emplace_back(rng.uniform(0.0, config_.height),
                         rng.uniform(0.0, config_.width));
  class_map_.resize(static_cast<std::size_t>(config_.height) * config_.width);
  for (int y = 0; y < config_.height; ++y)
    for (int x = 0; x < config_.width; ++x) {
      int best = 0;
      double best_d = 1e30;
      for (int k = 0; k < config_.n_land_classes; ++k) {
        const double dy = y - centers[static_cast<std::size_t>(k)].first;
        const double dx = x - centers[static_cast<std::size_t>(k)].second;
        const double d = dy * dy + dx * dx;
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      class_map_[static_cast<std::size_t>(y) * config_.width + x] = best;
    }

  base_.resize(static_cast<std::size_t>(config_.n_land_classes));
  phase_.resize(static_cast<std::size_t>(config_.n_land_classes));
  for (int k = 0; k < config_.n_land_classes; ++k) {
    base_[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(config_.channels));
    for (int c = 0; c < config_.channels; ++c)
      base_[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)] =
          rng.uniform(0.10, 0.55);
    phase_[static_cast<std::size_t>(k)] = rng.uniform(0.0, 365.0);
  }

  // Pixels of each hazard disk ordered by distance from the center, so a
  // footprint of any target area is the first N pixels.
  disk_.resize(config_.hazards.size());
  for (std::size_t h = 0; h < config_.hazards.size(); ++h) {
    const auto& hz = config_.hazards[h];
    std::vector<std::pair<double, std::size_t>> candidates;
    for (int y = hz.center_row - hz.radius; y <= hz.center_row + hz.radius; ++y)
      for (int x = hz.center_col - hz.radius; x <= hz.center_col + hz.radius; ++x) {
        const double dy = y - hz.center_row, dx = x - hz.center_col;
        const double d = dy * dy + dx * dx;
        if (d <= static_cast<double>(hz.radius) * hz.radius)
          candidates.emplace_back(d, static_cast<std::size_t>(y) * config_.width + x);
      }
    std::sort(candidates.begin(), candidates.end());
    for (const auto& [d, idx] : candidates) disk_[h].push_back(idx);
  }
}

double SceneModel::seasonal_term(int cls, int doy_shifted) const {
  const double phase = phase_[static_cast<std::size_t>(cls)];
  return std::sin(2.0 * M_PI * (static_cast<double>(doy_shifted) - phase) / 365.0);
}

Tensor SceneModel::expected_image(const Date& date) const {
  const int doy = day_of_year(date);
  Tensor img({config_.channels, config_.height, config_.width});
  for (int y = 0; y < config_.height; ++y)
    for (int x = 0; x < config_.width; ++x) {
      const int cls = land_class(y, x);
      const double season = config_.seasonal_amp * seasonal_term(cls, doy);
      for (int c = 0; c < config_.channels; ++c)
        img.at3(c, y, x) = static_cast<float>(
            base_[static_cast<std::size_t>(cls)][static_cast<std::size_t>(c)] + season);
    }
  return img;
}

double SceneModel::noise_sigma_at(const Date& date) const {
  const double doy = static_cast<double>(day_of_year(date));
  return config_.noise_sigma +
         config_.noise_seasonal * 0.5 * (1.0 + std::cos(2.0 * M_PI * doy / 365.0));
}

Tensor SceneModel::inject_hazard(Tensor& image, const HazardSpec& spec,
                                 const Date& date) const {
  Tensor mask({config_.height, config_.width});

  const long long elapsed = days_from_civil(date) - days_from_civil(spec.onset);
  if (elapsed < 0) return mask;
  if (spec.kind != HazardKind::kGradualGrowth && elapsed >= spec.duration_days)
    return mask;

  // Locate this spec's precomputed disk (specs are compared by identity of
  // their footprint geometry).
  const std::vector<std::size_t>* disk = nullptr;
  for (std::size_t h = 0; h < config_.hazards.size(); ++h) {
    const auto& hz = config_.hazards[h];
    if (hz.kind == spec.kind && hz.center_row == spec.center_row &&
        hz.center_col == spec.center_col && hz.radius == spec.radius &&
        hz.onset == spec.onset) {
      disk = &disk_[h];
      break;
    }
  }
  std::vector<std::size_t> local;
  if (!disk) {
    // Hazard not in the config list; build its footprint on the fly.
    std::vector<std::pair<double, std::size_t>> candidates;
    for (int y = spec.center_row - spec.radius; y <= spec.center_row + spec.radius; ++y)
      for (int x = spec.center_col - spec.radius; x <= spec.center_col + spec.radius; ++x) {
        const double dy = y - spec.center_row, dx = x - spec.center_col;
        const double d = dy * dy + dx * dx;
        if (d <= static_cast<double>(spec.radius) * spec.radius)
          candidates.emplace_back(d, static_cast<std::size_t>(y) * config_.width + x);
      }
    std::sort(candidates.begin(), candidates.end());
    for (const auto& [d, idx] : candidates) local.push_back(idx);
    disk = &local;
  }

  std::size_t n_pixels = disk->size();
  if (spec.kind == HazardKind::kGradualGrowth) {
    const double frac =
        std::min(1.0, static_cast<double>(elapsed) / spec.duration_days);
    n_pixels = std::min<std::size_t>(
        disk->size(),
        static_cast<std::size_t>(std::llround(disk_area(spec.radius) * frac)));
  }

  const std::size_t plane =
      static_cast<std::size_t>(config_.height) * config_.width;
  const int doy = day_of_year(date);
  for (std::size_t i = 0; i < n_pixels; ++i) {
    const std::size_t px = (*disk)[i];
    bool changed = false;
    if (spec.kind == HazardKind::kOutOfSeasonShift) {
      const int y = static_cast<int>(px / static_cast<std::size_t>(config_.width));
      const int x = static_cast<int>(px % static_cast<std::size_t>(config_.width));
      const int cls = land_class(y, x);
      const double normal = config_.seasonal_amp * seasonal_term(cls, doy);
      const double shifted =
          spec.magnitude *
          std::sin(2.0 * M_PI * (static_cast<double>(doy) + kHalfYear - phase_[static_cast<std::size_t>(cls)]) / 365.0);
      const double delta = shifted - normal;
      if (delta != 0.0) {
        for (int c = 0; c < config_.channels; ++c)
          image[static_cast<std::size_t>(c) * plane + px] += static_cast<float>(delta);
        changed = true;
      }
    } else if (spec.magnitude != 0.0) {
      for (int c = 0; c < config_.channels; ++c)
        image[static_cast<std::size_t>(c) * plane + px] +=
            static_cast<float>(spec.magnitude);
      changed = true;
    }
    if (changed) mask[px] = 1.0f;
  }
  return mask;
}

SceneData generate_scene(const SceneConfig& config) {
  const SceneModel model(config);

  SceneData out;
  const long long train_begin = days_from_civil(config.train_start());
  const long long test_begin = days_from_civil(config.test_start());
  const long long test_stop = days_from_civil(config.test_end());

  long image_index = 0;
  for (long long day = train_begin; day < test_stop; day += config.cadence_days,
                 ++image_index) {
    const Date date = civil_from_days(day);
    const bool in_test = day >= test_begin;

    Tensor img = model.expected_image(date);
    const double sigma = model.noise_sigma_at(date);
    if (sigma > 0.0) {
      Rng noise(config.seed ^ (0x5175c37fa1b2c3d4ull + static_cast<std::uint64_t>(image_index) * 0x9e3779b97f4a7c15ull));
      for (std::size_t i = 0; i < img.size(); ++i)
        img[i] += static_cast<float>(sigma * noise.gaussian());
    }

    if (!in_test) {
      out.train.images.push_back({std::move(img), date, day_of_year(date)});
      continue;
    }

    Tensor mask({config.height, config.width});
    bool any_active = false;
    for (const auto& hz : config.hazards) {
      const Tensor m = model.inject_hazard(img, hz, date);
      bool active = false;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] > 0.0f) {
          mask[i] = 1.0f;
          active = true;
        }
      }
      any_active = any_active || active;
    }
    out.test.images.push_back({std::move(img), date, day_of_year(date)});
    out.labels.emplace_back(date, any_active);
    out.test_masks.push_back(std::move(mask));
  }
  return out;
}

void write_scene(const SceneConfig& config, const std::string& out_dir) {
  const SceneData data = generate_scene(config);

  fs::create_directories(fs::path(out_dir) / "train");
  fs::create_directories(fs::path(out_dir) / "test");
  fs::create_directories(fs::path(out_dir) / "masks");

  for (const auto& img : data.train.images)
    write_multiband_tiff((fs::path(out_dir) / "train" /
                          ("roi_" + to_iso_string(img.date) + ".tif")).string(),
                         img.bands);
  for (const auto& img : data.test.images)
    write_multiband_tiff((fs::path(out_dir) / "test" /
                          ("roi_" + to_iso_string(img.date) + ".tif")).string(),
                         img.bands);
  for (std::size_t i = 0; i < data.test_masks.size(); ++i)
    write_multiband_tiff((fs::path(out_dir) / "masks" /
                          ("mask_" + to_iso_string(data.labels[i].first) + ".tif")).string(),
                         data.test_masks[i]);

  std::string csv = "date,is_hazard\n";
  for (const auto& [date, hazard] : data.labels)
    csv += to_iso_string(date) + "," + (hazard ? "1" : "0") + "\n";
  const std::string labels_path = (fs::path(out_dir) / "labels.csv").string();
  const std::string tmp = labels_path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write labels: " + tmp);
    out << csv;
  }
  fs::rename(tmp, labels_path);
}

}  // namespace sitsmon
