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
#include <vector>

#include "core/rng.hpp"
#include "core/scoring.hpp"

using namespace sitsmon;

namespace {

Tensor random_plane(Rng& rng, int c, int h, int w) {
  Tensor t({c, h, w});
  for (std::size_t i = 0; i < t.size(); ++i)
    t.data()[i] = static_cast<float>(rng.uniform(0.0, 1.0));
  return t;
}

int reflect101(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
  }
  return i;
}

// Naive O(window^2) per-pixel SSIM reference with Gaussian weights and
// reflect-101 borders.
// Inputs are rank-2 HxW planes.
TensorT<double> naive_ssim(const Tensor& x, const Tensor& y,
                           const SsimParams& p) {
  const int h = x.dim(0), w = x.dim(1);
  const int r = p.window / 2;

  std::vector<double> k(static_cast<std::size_t>(p.window));
  double ksum = 0.0;
  for (int i = -r; i <= r; ++i) {
    k[static_cast<std::size_t>(i + r)] =
        std::exp(-(i * i) / (2.0 * p.gaussian_sigma * p.gaussian_sigma));
    ksum += k[static_cast<std::size_t>(i + r)];
  }
  for (auto& v : k) v /= ksum;

  TensorT<double> out({h, w});
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      double mx = 0, my = 0, mxx = 0, myy = 0, mxy = 0;
      for (int di = -r; di <= r; ++di)
        for (int dj = -r; dj <= r; ++dj) {
          const double wgt = k[static_cast<std::size_t>(di + r)] *
                             k[static_cast<std::size_t>(dj + r)];
          const std::size_t idx =
              static_cast<std::size_t>(reflect101(i + di, h)) * w +
              reflect101(j + dj, w);
          const double a = x[idx];
          const double b = y[idx];
          mx += wgt * a;
          my += wgt * b;
          mxx += wgt * a * a;
          myy += wgt * b * b;
          mxy += wgt * a * b;
        }
      const double vx = mxx - mx * mx;
      const double vy = myy - my * my;
      const double cxy = mxy - mx * my;
      out[static_cast<std::size_t>(i) * w + j] = ((2 * mx * my + p.c1()) * (2 * cxy + p.c2())) /
                      ((mx * mx + my * my + p.c1()) * (vx + vy + p.c2()));
    }
  return out;
}

}  // namespace

TEST_CASE("ssim map matches the naive reference on 50 random pairs") {
  Rng rng(2024);
  SsimParams p;
  double max_err = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    Tensor x({32, 32}), y({32, 32});
    for (std::size_t i = 0; i < x.size(); ++i) {
      x.data()[i] = static_cast<float>(rng.uniform(0.0, 1.0));
      y.data()[i] = static_cast<float>(rng.uniform(0.0, 1.0));
    }
    // half the pairs are correlated to exercise high-SSIM regions
    if (trial % 2 == 0)
      for (std::size_t i = 0; i < y.size(); ++i)
        y.data()[i] = 0.9f * x.data()[i] + 0.1f * y.data()[i];

    const TensorT<double> got = ssim_map_channel(x, y, p);
    const TensorT<double> want = naive_ssim(x, y, p);
    for (std::size_t i = 0; i < got.size(); ++i)
      max_err = std::max(max_err, std::abs(got[i] - want[i]));
  }
  CHECK(max_err < 1e-6);
}

TEST_CASE("sdim identities on self-comparison") {
  Rng rng(77);
  SsimParams p;
  for (int trial = 0; trial < 5; ++trial) {
    const Tensor x = random_plane(rng, 3, 32, 32);
    CHECK(std::abs(sdim_score(x, x, p)) < 1e-7);
    const TensorT<double> map = sdim_map(x, x, p);
    for (std::size_t i = 0; i < map.size(); ++i)
      CHECK(std::abs(map[i]) < 1e-7);
  }
}

TEST_CASE("sdim score and map stay in range and are symmetric") {
  Rng rng(88);
  SsimParams p;
  for (int trial = 0; trial < 100; ++trial) {
    const Tensor x = random_plane(rng, 2, 16, 16);
    const Tensor y = random_plane(rng, 2, 16, 16);
    const double s = sdim_score(x, y, p);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    CHECK(sdim_score(y, x, p) == doctest::Approx(s).epsilon(1e-12));
    if (trial < 10) {
      const TensorT<double> map = sdim_map(x, y, p);
      for (std::size_t i = 0; i < map.size(); ++i) {
        CHECK(map[i] >= 0.0);
        CHECK(map[i] <= 1.0);
      }
    }
  }
}

TEST_CASE("sdim grows monotonically with corruption strength") {
  Rng rng(99);
  SsimParams p;
  const Tensor x = random_plane(rng, 1, 32, 32);
  double prev = -1.0;
  for (double amp : {0.0, 0.05, 0.1, 0.2, 0.4}) {
    Tensor y = x;
    Rng noise(5);
    for (std::size_t i = 0; i < y.size(); ++i)
      y.data()[i] += static_cast<float>(amp * noise.gaussian());
    const double s = sdim_score(x, y, p);
    CHECK(s > prev);
    prev = s;
  }
}

TEST_CASE("stabilizer constants switch between squared and raw") {
  SsimParams squared;
  CHECK(squared.c1() == doctest::Approx(1e-4));
  CHECK(squared.c2() == doctest::Approx(9e-4));
  SsimParams raw = squared;
  raw.raw_k_constants = true;
  CHECK(raw.c1() == doctest::Approx(0.01));
  CHECK(raw.c2() == doctest::Approx(0.03));

  Rng rng(3);
  const Tensor x = random_plane(rng, 1, 16, 16);
  const Tensor y = random_plane(rng, 1, 16, 16);
  CHECK(sdim_score(x, y, squared) != sdim_score(x, y, raw));
}

TEST_CASE("mae score and map") {
  Tensor x({1, 2, 2}), y({1, 2, 2});
  x.fill(0.5f);
  y.fill(0.25f);
  CHECK(mae_score(x, y) == doctest::Approx(0.25));
  const TensorT<double> map = mae_map(x, y);
  REQUIRE(map.rank() == 2);
  CHECK(map[0] == doctest::Approx(0.25));
  CHECK(mae_score(x, x) == doctest::Approx(0.0));
}
