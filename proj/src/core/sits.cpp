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

#include "core/sits.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "core/raster_io.hpp"
#include "core/rng.hpp"

namespace fs = std::filesystem;

namespace sitsmon {

namespace {

bool is_raster_name(const fs::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".tif" || ext == ".tiff";
}

void atomic_write_text(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write: " + tmp);
    out << text;
  }
  fs::rename(tmp, path);
}

float median_of(std::vector<float>& v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5f * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

SitsDataset load_sits_directory(const std::string& path, int expected_channels,
                                int patch_size,
                                const std::vector<int>& band_order) {
  if (!fs::is_directory(path)) throw IoError("not a directory: " + path);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_regular_file() && is_raster_name(entry.path()))
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no raster files in: " + path);

  SitsDataset ds;
  for (const auto& f : files) {
    Date date;
    if (!find_date_in_filename(f.filename().string(), &date))
      throw DataError("no ISO date in filename: " + f.filename().string());

    Tensor bands = read_multiband_tiff(f.string());
    if (!band_order.empty()) {
      if (static_cast<int>(band_order.size()) != expected_channels)
        throw InvalidArgument("band_order length must equal channel count");
      Tensor reordered({expected_channels, bands.dim(1), bands.dim(2)});
      const std::size_t plane =
          static_cast<std::size_t>(bands.dim(1)) * bands.dim(2);
      for (int c = 0; c < expected_channels; ++c) {
        const int src = band_order[static_cast<std::size_t>(c)];
        if (src < 0 || src >= bands.dim(0))
          throw InvalidArgument("band_order index out of range");
        std::copy_n(bands.data() + static_cast<std::size_t>(src) * plane, plane,
                    reordered.data() + static_cast<std::size_t>(c) * plane);
      }
      bands = std::move(reordered);
    }

    if (bands.dim(0) != expected_channels)
      throw DataError(f.filename().string() + ": expected " +
                      std::to_string(expected_channels) + " channels, got " +
                      std::to_string(bands.dim(0)));
    if (bands.dim(1) % patch_size != 0 || bands.dim(2) % patch_size != 0)
      throw DataError(f.filename().string() +
                      ": dimensions not divisible by patch size " +
                      std::to_string(patch_size));
    if (!all_finite(bands))
      throw DataError(f.filename().string() + ": non-finite pixel values");

    ds.images.push_back({std::move(bands), date, day_of_year(date)});
  }

  std::sort(ds.images.begin(), ds.images.end(),
            [](const SitsImage& a, const SitsImage& b) { return a.date < b.date; });

  for (std::size_t i = 1; i < ds.images.size(); ++i) {
    if (!(ds.images[i - 1].date < ds.images[i].date))
      throw DataError("duplicate acquisition date: " +
                      to_iso_string(ds.images[i].date));
    if (!ds.images[i].bands.same_shape(ds.images[0].bands))
      throw DataError("inconsistent image shapes in: " + path);
  }
  return ds;
}

double percentile(std::vector<float> values, double p) {
  if (values.empty()) throw InvalidArgument("percentile: empty input");
  const double rank = p / 100.0 * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(rank));
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo),
                   values.end());
  const double vlo = values[lo];
  if (hi == lo) return vlo;
  const double vhi =
      *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(lo) + 1,
                        values.end());
  return vlo + (rank - static_cast<double>(lo)) * (vhi - vlo);
}

NormStats compute_norm_stats(const SitsDataset& train, bool per_channel) {
  if (train.empty()) throw InvalidArgument("compute_norm_stats: empty dataset");
  NormStats stats;
  stats.channels = train.images[0].channels();

  const auto add_stats = [&stats](std::vector<float>& pool) {
    const double p1 = percentile(pool, 1.0);
    const double p99 = percentile(std::move(pool), 99.0);
    if (!(p99 > p1)) throw DataError("degenerate normalization stats: p99 <= p1");
    stats.p1.push_back(p1);
    stats.p99.push_back(p99);
  };

  if (per_channel) {
    const std::size_t plane = static_cast<std::size_t>(train.images[0].height()) *
                              train.images[0].width();
    for (int c = 0; c < stats.channels; ++c) {
      std::vector<float> pool;
      pool.reserve(plane * train.size());
      for (const auto& img : train.images) {
        const float* p = img.bands.data() + static_cast<std::size_t>(c) * plane;
        pool.insert(pool.end(), p, p + plane);
      }
      add_stats(pool);
    }
  } else {
    std::vector<float> pool;
    pool.reserve(train.images[0].bands.size() * train.size());
    for (const auto& img : train.images)
      pool.insert(pool.end(), img.bands.data(),
                  img.bands.data() + img.bands.size());
    add_stats(pool);
  }
  return stats;
}

SitsImage normalize(const SitsImage& image, const NormStats& stats) {
  if (stats.p1.empty() || stats.p1.size() != stats.p99.size())
    throw InvalidArgument("normalize: invalid stats");
  SitsImage out;
  out.date = image.date;
  out.day_of_year = image.day_of_year;
  out.bands = Tensor(image.bands.shape());

  const std::size_t plane =
      static_cast<std::size_t>(image.height()) * image.width();
  for (int c = 0; c < image.channels(); ++c) {
    const std::size_t k = stats.per_channel() ? static_cast<std::size_t>(c) : 0;
    const double p1 = stats.p1[k];
    const double inv = 1.0 / (stats.p99[k] - p1);
    const float* src = image.bands.data() + static_cast<std::size_t>(c) * plane;
    float* dst = out.bands.data() + static_cast<std::size_t>(c) * plane;
    for (std::size_t i = 0; i < plane; ++i) {
      const double v = (static_cast<double>(src[i]) - p1) * inv;
      dst[i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
    }
  }
  return out;
}

BaselineImage compute_baseline(const SitsDataset& train_normalized) {
  if (train_normalized.empty())
    throw InvalidArgument("compute_baseline: empty dataset");
  const auto& shape = train_normalized.images[0].bands.shape();
  BaselineImage base;
  base.bands = Tensor(shape);

  std::vector<float> column(train_normalized.size());
  for (std::size_t i = 0; i < base.bands.size(); ++i) {
    for (std::size_t k = 0; k < train_normalized.size(); ++k)
      column[k] = train_normalized.images[k].bands[i];
    base.bands[i] = median_of(column);
  }
  return base;
}

BaselineImage compute_baseline_masked(const SitsDataset& train_normalized,
                                      const std::vector<std::vector<bool>>& include,
                                      int patch_size, int* fallbacks) {
  if (train_normalized.empty())
    throw InvalidArgument("compute_baseline_masked: empty dataset");
  if (include.size() != train_normalized.size())
    throw InvalidArgument("compute_baseline_masked: mask/date count mismatch");

  const SitsImage& first = train_normalized.images[0];
  const int gh = first.height() / patch_size;
  const int gw = first.width() / patch_size;
  BaselineImage base;
  base.bands = Tensor(first.bands.shape());
  if (fallbacks) *fallbacks = 0;

  std::vector<float> column;
  column.reserve(train_normalized.size());
  for (int pr = 0; pr < gh; ++pr) {
    for (int pc = 0; pc < gw; ++pc) {
      const std::size_t pos = static_cast<std::size_t>(pr) * gw + pc;
      std::vector<std::size_t> dates;
      for (std::size_t k = 0; k < train_normalized.size(); ++k)
        if (include[k][pos]) dates.push_back(k);
      const bool fallback = dates.empty();
      if (fallback) {
        if (fallbacks) ++(*fallbacks);
        dates.resize(train_normalized.size());
        for (std::size_t k = 0; k < dates.size(); ++k) dates[k] = k;
      }
      for (int c = 0; c < first.channels(); ++c) {
        for (int y = pr * patch_size; y < (pr + 1) * patch_size; ++y) {
          for (int x = pc * patch_size; x < (pc + 1) * patch_size; ++x) {
            column.clear();
            for (std::size_t k : dates)
              column.push_back(train_normalized.images[k].bands.at3(c, y, x));
            base.bands.at3(c, y, x) = median_of(column);
          }
        }
      }
    }
  }
  return base;
}

std::vector<PatchSample> extract_patch_grid(const SitsImage& image,
                                            const BaselineImage& baseline,
                                            int patch_size) {
  if (image.height() % patch_size != 0 || image.width() % patch_size != 0)
    throw InvalidArgument("extract_patch_grid: dimensions not divisible by " +
                          std::to_string(patch_size));
  if (!image.bands.same_shape(baseline.bands))
    throw InvalidArgument("extract_patch_grid: baseline/image shape mismatch");

  const int channels = image.channels();
  const int gh = image.height() / patch_size;
  const int gw = image.width() / patch_size;

  std::vector<PatchSample> samples;
  samples.reserve(static_cast<std::size_t>(gh) * gw);
  for (int pr = 0; pr < gh; ++pr) {
    for (int pc = 0; pc < gw; ++pc) {
      PatchSample s;
      s.day_of_year = image.day_of_year;
      s.row = pr;
      s.col = pc;
      s.baseline_patch = Tensor({channels, patch_size, patch_size});
      s.target_patch = Tensor({channels, patch_size, patch_size});
      for (int c = 0; c < channels; ++c)
        for (int y = 0; y < patch_size; ++y)
          for (int x = 0; x < patch_size; ++x) {
            s.baseline_patch.at3(c, y, x) =
                baseline.bands.at3(c, pr * patch_size + y, pc * patch_size + x);
            s.target_patch.at3(c, y, x) =
                image.bands.at3(c, pr * patch_size + y, pc * patch_size + x);
          }
      samples.push_back(std::move(s));
    }
  }
  return samples;
}

Tensor stitch_patches(const std::vector<Tensor>& patches, int grid_rows,
                      int grid_cols) {
  if (patches.empty() ||
      patches.size() != static_cast<std::size_t>(grid_rows) * grid_cols)
    throw InvalidArgument("stitch_patches: patch count mismatch");
  const int channels = patches[0].dim(0);
  const int ph = patches[0].dim(1);
  const int pw = patches[0].dim(2);

  Tensor out({channels, grid_rows * ph, grid_cols * pw});
  for (int pr = 0; pr < grid_rows; ++pr)
    for (int pc = 0; pc < grid_cols; ++pc) {
      const Tensor& p = patches[static_cast<std::size_t>(pr) * grid_cols + pc];
      if (!p.same_shape(patches[0]))
        throw InvalidArgument("stitch_patches: inconsistent patch shapes");
      for (int c = 0; c < channels; ++c)
        for (int y = 0; y < ph; ++y)
          for (int x = 0; x < pw; ++x)
            out.at3(c, pr * ph + y, pc * pw + x) = p.at3(c, y, x);
    }
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, double val_fraction, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("split: empty sample list");
  if (!(val_fraction > 0.0 && val_fraction < 1.0))
    throw InvalidArgument("split: val_fraction must be in (0, 1)");

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  std::size_t n_val = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * val_fraction));
  n_val = std::clamp<std::size_t>(n_val, 1, n - 1);

  std::vector<std::size_t> val(order.begin(),
                               order.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_val),
                                 order.end());
  std::sort(val.begin(), val.end());
  std::sort(train.begin(), train.end());
  return {train, val};
}

std::pair<std::vector<PatchSample>, std::vector<PatchSample>> split_train_val(
    const std::vector<PatchSample>& samples, double val_fraction,
    std::uint64_t seed) {
  auto [train_idx, val_idx] = split_indices(samples.size(), val_fraction, seed);
  std::pair<std::vector<PatchSample>, std::vector<PatchSample>> out;
  for (std::size_t i : train_idx) out.first.push_back(samples[i]);
  for (std::size_t i : val_idx) out.second.push_back(samples[i]);
  return out;
}

void save_norm_stats(const std::string& path, const NormStats& stats) {
  nlohmann::json j;
  j["channels"] = stats.channels;
  if (stats.per_channel()) {
    j["p1"] = stats.p1;
    j["p99"] = stats.p99;
  } else {
    j["p1"] = stats.p1.at(0);
    j["p99"] = stats.p99.at(0);
  }
  atomic_write_text(path, j.dump(2) + "\n");
}

NormStats load_norm_stats(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open norm stats: " + path);
  nlohmann::json j;
  in >> j;
  NormStats stats;
  stats.channels = j.at("channels").get<int>();
  if (j.at("p1").is_array()) {
    stats.p1 = j.at("p1").get<std::vector<double>>();
    stats.p99 = j.at("p99").get<std::vector<double>>();
  } else {
    stats.p1 = {j.at("p1").get<double>()};
    stats.p99 = {j.at("p99").get<double>()};
  }
  for (std::size_t i = 0; i < stats.p1.size(); ++i)
    if (!(stats.p99[i] > stats.p1[i]))
      throw DataError("invalid norm stats in: " + path);
  return stats;
}

}  // namespace sitsmon
