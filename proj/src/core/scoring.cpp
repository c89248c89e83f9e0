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

#include "core/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "core/common.hpp"

namespace sitsmon {

namespace {

// reflect-101 index (mirror without repeating the edge pixel)
inline int reflect(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
  }
  return i;
}

std::vector<double> gaussian_kernel(int window, double sigma) {
  const int r = window / 2;
  std::vector<double> k(static_cast<std::size_t>(window));
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    const double v = std::exp(-0.5 * (static_cast<double>(i) * i) / (sigma * sigma));
    k[static_cast<std::size_t>(i + r)] = v;
    sum += v;
  }
  for (auto& v : k) v /= sum;
  return k;
}

// Separable Gaussian filter with reflect-101 borders; output same shape.
TensorT<double> gauss_filter(const TensorT<double>& img,
                             const std::vector<double>& kernel) {
  const int h = img.dim(0), w = img.dim(1);
  const int r = static_cast<int>(kernel.size()) / 2;
  TensorT<double> tmp({h, w}), out({h, w});
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k)
        acc += kernel[static_cast<std::size_t>(k + r)] *
               img[static_cast<std::size_t>(y) * w + reflect(x + k, w)];
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k)
        acc += kernel[static_cast<std::size_t>(k + r)] *
               tmp[static_cast<std::size_t>(reflect(y + k, h)) * w + x];
      out[static_cast<std::size_t>(y) * w + x] = acc;
    }
  return out;
}

TensorT<double> channel_to_double(const Tensor& t, int c) {
  const int h = t.dim(1), w = t.dim(2);
  TensorT<double> out({h, w});
  const float* src = t.data() + static_cast<std::size_t>(c) * h * w;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = src[i];
  return out;
}

TensorT<double> ssim_plane(const TensorT<double>& p, const TensorT<double>& o,
                           const SsimParams& params) {
  const int h = p.dim(0), w = p.dim(1);
  const auto kernel = gaussian_kernel(params.window, params.gaussian_sigma);

  TensorT<double> pp({h, w}), oo({h, w}), po({h, w});
  for (std::size_t i = 0; i < pp.size(); ++i) {
    pp[i] = p[i] * p[i];
    oo[i] = o[i] * o[i];
    po[i] = p[i] * o[i];
  }
  const TensorT<double> mu_p = gauss_filter(p, kernel);
  const TensorT<double> mu_o = gauss_filter(o, kernel);
  const TensorT<double> e_pp = gauss_filter(pp, kernel);
  const TensorT<double> e_oo = gauss_filter(oo, kernel);
  const TensorT<double> e_po = gauss_filter(po, kernel);

  const double c1 = params.c1(), c2 = params.c2();
  TensorT<double> out({h, w});
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double var_p = e_pp[i] - mu_p[i] * mu_p[i];
    const double var_o = e_oo[i] - mu_o[i] * mu_o[i];
    const double cov = e_po[i] - mu_p[i] * mu_o[i];
    out[i] = ((2.0 * mu_p[i] * mu_o[i] + c1) * (2.0 * cov + c2)) /
             ((mu_p[i] * mu_p[i] + mu_o[i] * mu_o[i] + c1) * (var_p + var_o + c2));
  }
  return out;
}

void check_pair(const Tensor& pred, const Tensor& obs, int rank) {
  if (pred.rank() != rank || obs.rank() != rank)
    throw InvalidArgument("scoring: unexpected tensor rank");
  if (!pred.same_shape(obs)) throw InvalidArgument("scoring: shape mismatch");
}

// Mean SSIM map over channels (the per-pixel average of channel maps).
TensorT<double> mean_channel_ssim(const Tensor& pred, const Tensor& obs,
                                  const SsimParams& params) {
  const int c = pred.dim(0), h = pred.dim(1), w = pred.dim(2);
  TensorT<double> avg({h, w});
  for (int cc = 0; cc < c; ++cc) {
    const TensorT<double> m =
        ssim_plane(channel_to_double(pred, cc), channel_to_double(obs, cc), params);
    for (std::size_t i = 0; i < avg.size(); ++i) avg[i] += m[i];
  }
  for (std::size_t i = 0; i < avg.size(); ++i) avg[i] /= c;
  return avg;
}

}  // namespace

void SsimParams::validate() const {
  if (window < 1 || window % 2 == 0)
    throw InvalidArgument("ssim: window must be odd and positive");
  if (!(gaussian_sigma > 0.0)) throw InvalidArgument("ssim: sigma must be positive");
  if (!(k1 > 0.0 && k2 > 0.0)) throw InvalidArgument("ssim: k1, k2 must be positive");
  if (!(dynamic_range > 0.0)) throw InvalidArgument("ssim: dynamic range must be positive");
}

TensorT<double> ssim_map_channel(const Tensor& pred, const Tensor& obs,
                                 const SsimParams& params) {
  params.validate();
  check_pair(pred, obs, 2);
  const int h = pred.dim(0), w = pred.dim(1);
  TensorT<double> p({h, w}), o({h, w});
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = pred[i];
    o[i] = obs[i];
  }
  return ssim_plane(p, o, params);
}

double sdim_score(const Tensor& pred, const Tensor& obs, const SsimParams& params) {
  params.validate();
  check_pair(pred, obs, 3);
  const TensorT<double> avg = mean_channel_ssim(pred, obs, params);
  double mean = 0.0;
  for (std::size_t i = 0; i < avg.size(); ++i) mean += avg[i];
  mean /= static_cast<double>(avg.size());
  return (1.0 - mean) / 2.0;
}

TensorT<double> sdim_map(const Tensor& pred, const Tensor& obs,
                         const SsimParams& params) {
  params.validate();
  check_pair(pred, obs, 3);
  TensorT<double> map = mean_channel_ssim(pred, obs, params);
  for (std::size_t i = 0; i < map.size(); ++i) {
    const double inv = std::clamp(1.0 - map[i], 0.0, 1.0);
    map[i] = inv * inv;
  }
  return map;
}

double mae_score(const Tensor& pred, const Tensor& obs) {
  check_pair(pred, obs, 3);
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    sum += std::abs(static_cast<double>(pred[i]) - obs[i]);
  return sum / static_cast<double>(pred.size());
}

TensorT<double> mae_map(const Tensor& pred, const Tensor& obs) {
  check_pair(pred, obs, 3);
  const int c = pred.dim(0), h = pred.dim(1), w = pred.dim(2);
  TensorT<double> map({h, w});
  for (int cc = 0; cc < c; ++cc) {
    const float* p = pred.data() + static_cast<std::size_t>(cc) * h * w;
    const float* o = obs.data() + static_cast<std::size_t>(cc) * h * w;
    for (std::size_t i = 0; i < map.size(); ++i)
      map[i] += std::abs(static_cast<double>(p[i]) - o[i]);
  }
  for (std::size_t i = 0; i < map.size(); ++i)
    map[i] = std::clamp(map[i] / c, 0.0, 1.0);
  return map;
}

}  // namespace sitsmon
