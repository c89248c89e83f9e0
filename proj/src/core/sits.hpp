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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/dates.hpp"
#include "core/tensor.hpp"

namespace sitsmon {

// One dated multiband observation of the region of interest.
struct SitsImage {
  Tensor bands;  // CxHxW reflectance
  Date date;
  int day_of_year = 0;  // [1, 366]

  int channels() const { return bands.dim(0); }
  int height() const { return bands.dim(1); }
  int width() const { return bands.dim(2); }
};

// Ordered (ascending date) collection of images with uniform shape.
struct SitsDataset {
  std::vector<SitsImage> images;

  bool empty() const { return images.empty(); }
  std::size_t size() const { return images.size(); }
};

// 1st/99th percentile scalars governing all normalization. In per-channel
// mode the vectors hold one entry per band; pooled mode holds one entry.
struct NormStats {
  std::vector<double> p1;
  std::vector<double> p99;
  int channels = 0;

  bool per_channel() const { return p1.size() > 1; }
};

// Per-pixel, per-channel median over normalized training images.
struct BaselineImage {
  Tensor bands;  // CxHxW in [0, 1]
};

// One 32x32 training unit.
struct PatchSample {
  Tensor baseline_patch;  // Cx32x32
  Tensor target_patch;    // Cx32x32
  int day_of_year = 0;
  int row = 0;
  int col = 0;
};

// Loads every raster matching <prefix>_<YYYY-MM-DD>.<ext> under `path`,
// validates shape/channel invariants and returns the dataset sorted by date.
// band_order, when non-empty, reorders file bands into pipeline channels.
SitsDataset load_sits_directory(const std::string& path, int expected_channels,
                                int patch_size,
                                const std::vector<int>& band_order = {});

// Percentile with linear interpolation between order statistics:
// rank = p/100 * (n-1).
double percentile(std::vector<float> values, double p);

NormStats compute_norm_stats(const SitsDataset& train, bool per_channel = false);

SitsImage normalize(const SitsImage& image, const NormStats& stats);

BaselineImage compute_baseline(const SitsDataset& train_normalized);

// Baseline restricted to the train split: include[i][p] says whether patch
// position p of image i contributes. Positions with no included date fall
// back to the all-image median (the fallback is reported via `fallbacks`).
BaselineImage compute_baseline_masked(const SitsDataset& train_normalized,
                                      const std::vector<std::vector<bool>>& include,
                                      int patch_size, int* fallbacks = nullptr);

std::vector<PatchSample> extract_patch_grid(const SitsImage& image,
                                            const BaselineImage& baseline,
                                            int patch_size = 32);

// Stitches row-major patches back into a CxHxW image; inverse of
// extract_patch_grid for the target patches.
Tensor stitch_patches(const std::vector<Tensor>& patches, int grid_rows,
                      int grid_cols);

std::pair<std::vector<PatchSample>, std::vector<PatchSample>> split_train_val(
    const std::vector<PatchSample>& samples, double val_fraction,
    std::uint64_t seed);

// Index-level split used by the pipeline (same shuffle as split_train_val).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, double val_fraction, std::uint64_t seed);

void save_norm_stats(const std::string& path, const NormStats& stats);
NormStats load_norm_stats(const std::string& path);

}  // namespace sitsmon
