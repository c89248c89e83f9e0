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
#include <utility>
#include <vector>

#include "core/tensor.hpp"

namespace sitsmon {

// Cyclical seasonal + normalized positional conditioning values.
struct EncodingVector {
  double t_sin = 0.0;
  double t_cos = 1.0;
  double p_row = 0.0;
  double p_col = 0.0;
};

// Which conditioning channels the model consumes. The ablations drop the
// position channels and/or replace the cyclical pair by one linear channel.
enum class EncodingMode {
  kFull,                  // t_sin, t_cos, p_row, p_col
  kNoPosition,            // t_sin, t_cos
  kLinearTime,            // t_lin, p_row, p_col
  kLinearTimeNoPosition,  // t_lin
};

// t_sin = sin(2*pi*t/365), t_cos = cos(2*pi*t/365); t in [1, 365]
// (day 366 is mapped to 365 upstream).
std::pair<double, double> seasonal_encoding(int day_of_year);

// Normalized day of year: (t-1)/364, in [0, 1]. Linear-time ablation.
double linear_time_encoding(int day_of_year);

// p_row = row/n_patches, p_col = col/n_patches.
std::pair<double, double> positional_encoding(int row, int col, int n_patches);

EncodingVector make_encoding(int day_of_year, int row, int col, int n_patches);

int encoding_channel_count(EncodingMode mode);
std::vector<std::string> encoding_channel_names(EncodingMode mode);

// Conditioning values in their fixed channel order for `mode`.
std::vector<double> conditioning_values(int day_of_year, int row, int col,
                                        int n_patches, EncodingMode mode);

// Non-square grids: rows and cols normalized by their own patch counts.
std::vector<double> conditioning_values(int day_of_year, int row, int col,
                                        int n_rows, int n_cols,
                                        EncodingMode mode);

// Expands each value into a constant spatial plane: K x size x size.
Tensor constant_planes(const std::vector<double>& values, int size);

// Full-order (t_sin, t_cos, p_row, p_col) expansion of an encoding vector.
Tensor encoding_channels(const EncodingVector& vec, int size);

EncodingMode encoding_mode_from_flags(bool no_position, bool linear_time);
std::string encoding_mode_name(EncodingMode mode);
EncodingMode encoding_mode_from_name(const std::string& name);

}  // namespace sitsmon
