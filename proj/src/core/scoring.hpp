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

#include <string>

#include "core/dates.hpp"
#include "core/tensor.hpp"

namespace sitsmon {

struct SsimParams {
  int window = 11;
  double gaussian_sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
  // Stabilizers are C1 = (k1*L)^2, C2 = (k2*L)^2 by default; this switch
  // uses k1/k2 directly instead, for sensitivity checks.
  bool raw_k_constants = false;

  void validate() const;
  double c1() const { return raw_k_constants ? k1 : k1 * dynamic_range * k1 * dynamic_range; }
  double c2() const { return raw_k_constants ? k2 : k2 * dynamic_range * k2 * dynamic_range; }
};

// Per-image anomaly verdict plus the hazard map.
struct AnomalyResult {
  Date date;
  int day_of_year = 0;
  double score = 0.0;      // SDIM (or MAE under the ablation), in [0, 1]
  double threshold = 0.0;  // tau(day_of_year)
  double residual = 0.0;   // score - threshold
  bool flag = false;
  TensorT<double> heatmap;  // HxW in [0, 1]
};

// Per-pixel SSIM of one channel using a Gaussian-weighted sliding window
// (reflect-101 border handling); output covers every pixel.
TensorT<double> ssim_map_channel(const Tensor& pred, const Tensor& obs,
                                 const SsimParams& params);

// Mean SSIM over pixels and channels, inverted into [0, 1]:
// (1 - mean SSIM) / 2.
double sdim_score(const Tensor& pred, const Tensor& obs, const SsimParams& params);

// Channel-averaged SSIM map, inverted, clamped to [0, 1], then squared.
TensorT<double> sdim_map(const Tensor& pred, const Tensor& obs,
                         const SsimParams& params);

// Ablation scorer: mean absolute error and the channel-mean |diff| map.
double mae_score(const Tensor& pred, const Tensor& obs);
TensorT<double> mae_map(const Tensor& pred, const Tensor& obs);

}  // namespace sitsmon
