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

#include <algorithm>
#include <filesystem>
#include <set>
#include <vector>

#include "core/common.hpp"
#include "core/raster_io.hpp"
#include "core/rng.hpp"
#include "core/sits.hpp"

using namespace sitsmon;
namespace fs = std::filesystem;

namespace {

fs::path make_temp_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("sitsmon_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Tensor random_bands(Rng& rng, int c, int h, int w, float lo = 0.0f,
                    float hi = 1.0f) {
  Tensor t({c, h, w});
  for (std::size_t i = 0; i < t.size(); ++i)
    t.data()[i] = static_cast<float>(rng.uniform(lo, hi));
  return t;
}

}  // namespace

TEST_CASE("tiff round trip preserves values and shape") {
  const fs::path dir = make_temp_dir("tiff");
  Rng rng(1);
  const Tensor t = random_bands(rng, 3, 8, 6, -2.0f, 5.0f);
  const std::string path = (dir / "x.tif").string();
  write_multiband_tiff(path, t);
  const Tensor back = read_multiband_tiff(path);
  REQUIRE(back.rank() == 3);
  CHECK(back.dim(0) == 3);
  CHECK(back.dim(1) == 8);
  CHECK(back.dim(2) == 6);
  for (std::size_t i = 0; i < t.size(); ++i)
    CHECK(back.data()[i] == t.data()[i]);
  fs::remove_all(dir);
}

TEST_CASE("percentile interpolates between order statistics") {
  // values 0..99: rank = p/100*(n-1)
  std::vector<float> v(100);
  for (int i = 0; i < 100; ++i) v[static_cast<std::size_t>(i)] = static_cast<float>(i);
  CHECK(percentile(v, 0.0) == doctest::Approx(0.0));
  CHECK(percentile(v, 100.0) == doctest::Approx(99.0));
  CHECK(percentile(v, 50.0) == doctest::Approx(49.5));
  CHECK(percentile(v, 1.0) == doctest::Approx(0.99));
  CHECK(percentile(v, 99.0) == doctest::Approx(98.01));
  CHECK(percentile({5.0f}, 73.0) == doctest::Approx(5.0));
}

TEST_CASE("normalization clamps into the unit interval") {
  SitsDataset data;
  SitsImage img;
  img.bands = Tensor({1, 2, 2});
  img.bands.data()[0] = 0.0f;
  img.bands.data()[1] = 1.0f;
  img.bands.data()[2] = 2.0f;
  img.bands.data()[3] = 3.0f;
  img.date = {2020, 1, 1};
  img.day_of_year = 1;
  data.images.push_back(img);

  const NormStats stats = compute_norm_stats(data);
  REQUIRE(stats.p1.size() == 1);
  const SitsImage norm = normalize(img, stats);
  for (std::size_t i = 0; i < norm.bands.size(); ++i) {
    CHECK(norm.bands.data()[i] >= 0.0f);
    CHECK(norm.bands.data()[i] <= 1.0f);
  }
  CHECK(norm.bands.data()[0] == 0.0f);
  CHECK(norm.bands.data()[3] == 1.0f);
}

TEST_CASE("per-channel stats differ from pooled on skewed channels") {
  Rng rng(3);
  SitsDataset data;
  SitsImage img;
  img.bands = Tensor({2, 4, 4});
  for (int i = 0; i < 16; ++i) {
    img.bands.data()[i] = static_cast<float>(rng.uniform(0.0, 1.0));
    img.bands.data()[16 + i] = static_cast<float>(rng.uniform(10.0, 11.0));
  }
  img.date = {2020, 1, 1};
  data.images.push_back(img);

  const NormStats pooled = compute_norm_stats(data, false);
  const NormStats per = compute_norm_stats(data, true);
  CHECK(pooled.p1.size() == 1);
  REQUIRE(per.p1.size() == 2);
  CHECK(per.p99[0] < 2.0);
  CHECK(per.p1[1] > 9.0);
}

TEST_CASE("baseline is the per-pixel median") {
  SitsDataset data;
  const float values[5] = {0.9f, 0.1f, 0.5f, 0.3f, 0.7f};
  for (int i = 0; i < 5; ++i) {
    SitsImage img;
    img.bands = Tensor({1, 1, 1});
    img.bands.data()[0] = values[i];
    img.date = {2020, 1, 1 + i};
    data.images.push_back(img);
  }
  CHECK(compute_baseline(data).bands.data()[0] == doctest::Approx(0.5));
  data.images.pop_back();  // even count -> mean of the two central values
  CHECK(compute_baseline(data).bands.data()[0] == doctest::Approx(0.4));
}

TEST_CASE("masked baseline honors the inclusion mask and falls back") {
  SitsDataset data;
  for (int i = 0; i < 3; ++i) {
    SitsImage img;
    img.bands = Tensor({1, 2, 2});
    img.bands.fill(static_cast<float>(i));
    img.date = {2020, 1, 1 + i};
    data.images.push_back(img);
  }
  // patch size 2 -> 2x1 patch grid... here 2x2 image, patch 2 -> single position
  std::vector<std::vector<bool>> include(3, std::vector<bool>(1, false));
  include[2][0] = true;
  int fallbacks = -1;
  BaselineImage b = compute_baseline_masked(data, include, 2, &fallbacks);
  CHECK(fallbacks == 0);
  CHECK(b.bands.data()[0] == doctest::Approx(2.0));

  // empty mask at the only position -> all-image median fallback
  include[2][0] = false;
  b = compute_baseline_masked(data, include, 2, &fallbacks);
  CHECK(fallbacks == 1);
  CHECK(b.bands.data()[0] == doctest::Approx(1.0));
}

TEST_CASE("patch grid extraction and stitching are inverse") {
  Rng rng(7);
  SitsImage img;
  img.bands = random_bands(rng, 2, 8, 12);
  img.date = {2021, 6, 1};
  img.day_of_year = 152;
  BaselineImage baseline;
  baseline.bands = random_bands(rng, 2, 8, 12);

  const auto samples = extract_patch_grid(img, baseline, 4);
  REQUIRE(samples.size() == 6);  // 2x3 grid
  CHECK(samples[0].row == 0);
  CHECK(samples[0].col == 0);
  CHECK(samples[5].row == 1);
  CHECK(samples[5].col == 2);
  CHECK(samples[3].day_of_year == 152);

  std::vector<Tensor> targets;
  for (const auto& s : samples) targets.push_back(s.target_patch);
  const Tensor stitched = stitch_patches(targets, 2, 3);
  REQUIRE(stitched.size() == img.bands.size());
  for (std::size_t i = 0; i < stitched.size(); ++i)
    CHECK(stitched.data()[i] == img.bands.data()[i]);
}

TEST_CASE("split_indices is deterministic, disjoint and sized") {
  const auto [train1, val1] = split_indices(1000, 0.1, 42);
  const auto [train2, val2] = split_indices(1000, 0.1, 42);
  CHECK(train1 == train2);
  CHECK(val1 == val2);
  CHECK(val1.size() == 100);
  CHECK(train1.size() == 900);

  std::set<std::size_t> all(train1.begin(), train1.end());
  all.insert(val1.begin(), val1.end());
  CHECK(all.size() == 1000);

  const auto [train3, val3] = split_indices(1000, 0.1, 43);
  CHECK(val1 != val3);

  // both sides stay non-empty at extreme fractions
  const auto [t4, v4] = split_indices(3, 0.01, 1);
  CHECK(v4.size() == 1);
  CHECK(t4.size() == 2);
}

TEST_CASE("norm stats json round trip") {
  const fs::path dir = make_temp_dir("stats");
  NormStats stats;
  stats.p1 = {0.125, -3.5};
  stats.p99 = {0.875, 12.25};
  stats.channels = 2;
  const std::string path = (dir / "norm_stats.json").string();
  save_norm_stats(path, stats);
  const NormStats back = load_norm_stats(path);
  CHECK(back.channels == 2);
  REQUIRE(back.p1.size() == 2);
  CHECK(back.p1[1] == stats.p1[1]);
  CHECK(back.p99[0] == stats.p99[0]);
  fs::remove_all(dir);
}

TEST_CASE("directory loading validates dates, shapes and channels") {
  const fs::path dir = make_temp_dir("load");
  Rng rng(11);
  for (const char* date : {"2020-01-05", "2020-03-01", "2020-02-10"}) {
    write_multiband_tiff((dir / (std::string("roi_") + date + ".tif")).string(),
                         random_bands(rng, 2, 8, 8));
  }
  SitsDataset data = load_sits_directory(dir.string(), 2, 4);
  REQUIRE(data.size() == 3);
  CHECK(data.images[0].date < data.images[1].date);  // sorted
  CHECK(data.images[1].date.month == 2);
  CHECK(data.images[0].day_of_year == 5);

  // wrong channel count
  CHECK_THROWS_AS(load_sits_directory(dir.string(), 3, 4), DataError);
  // dims not divisible by the patch size
  CHECK_THROWS_AS(load_sits_directory(dir.string(), 2, 5), DataError);

  // missing date in name
  write_multiband_tiff((dir / "nodate.tif").string(), random_bands(rng, 2, 8, 8));
  CHECK_THROWS_AS(load_sits_directory(dir.string(), 2, 4), DataError);
  fs::remove((dir / "nodate.tif"));

  // duplicate date
  write_multiband_tiff((dir / "roi2_2020-01-05.tif").string(),
                       random_bands(rng, 2, 8, 8));
  CHECK_THROWS_AS(load_sits_directory(dir.string(), 2, 4), DataError);
  fs::remove_all(dir);
}

TEST_CASE("band_order reorders file bands") {
  const fs::path dir = make_temp_dir("bands");
  Tensor t({2, 4, 4});
  for (int i = 0; i < 16; ++i) {
    t.data()[i] = 1.0f;
    t.data()[16 + i] = 2.0f;
  }
  write_multiband_tiff((dir / "roi_2020-01-01.tif").string(), t);
  SitsDataset data = load_sits_directory(dir.string(), 2, 4, {1, 0});
  CHECK(data.images[0].bands.data()[0] == 2.0f);
  CHECK(data.images[0].bands.data()[16] == 1.0f);
  fs::remove_all(dir);
}
