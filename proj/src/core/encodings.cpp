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

#include "core/encodings.hpp"

#include <cmath>
#include <tuple>

#include "core/common.hpp"

namespace sitsmon {

std::pair<double, double> seasonal_encoding(int day_of_year) {
  if (day_of_year < 1 || day_of_year > 365)
    throw InvalidArgument("seasonal_encoding: day of year out of [1, 365]: " +
                          std::to_string(day_of_year));
  const double angle = 2.0 * M_PI * static_cast<double>(day_of_year) / 365.0;
  return {std::sin(angle), std::cos(angle)};
}

double linear_time_encoding(int day_of_year) {
  if (day_of_year < 1 || day_of_year > 365)
    throw InvalidArgument("linear_time_encoding: day of year out of [1, 365]");
  return static_cast<double>(day_of_year - 1) / 364.0;
}

std::pair<double, double> positional_encoding(int row, int col, int n_patches) {
  if (n_patches <= 0) throw InvalidArgument("positional_encoding: n_patches <= 0");
  if (row < 0 || row >= n_patches || col < 0 || col >= n_patches)
    throw InvalidArgument("positional_encoding: index out of range");
  return {static_cast<double>(row) / n_patches,
          static_cast<double>(col) / n_patches};
}

EncodingVector make_encoding(int day_of_year, int row, int col, int n_patches) {
  EncodingVector v;
  std::tie(v.t_sin, v.t_cos) = seasonal_encoding(day_of_year);
  std::tie(v.p_row, v.p_col) = positional_encoding(row, col, n_patches);
  return v;
}

int encoding_channel_count(EncodingMode mode) {
  switch (mode) {
    case EncodingMode::kFull: return 4;
    case EncodingMode::kNoPosition: return 2;
    case EncodingMode::kLinearTime: return 3;
    case EncodingMode::kLinearTimeNoPosition: return 1;
  }
  throw InvalidArgument("unknown encoding mode");
}

std::vector<std::string> encoding_channel_names(EncodingMode mode) {
  switch (mode) {
    case EncodingMode::kFull: return {"t_sin", "t_cos", "p_row", "p_col"};
    case EncodingMode::kNoPosition: return {"t_sin", "t_cos"};
    case EncodingMode::kLinearTime: return {"t_lin", "p_row", "p_col"};
    case EncodingMode::kLinearTimeNoPosition: return {"t_lin"};
  }
  throw InvalidArgument("unknown encoding mode");
}

std::vector<double> conditioning_values(int day_of_year, int row, int col,
                                        int n_patches, EncodingMode mode) {
  return conditioning_values(day_of_year, row, col, n_patches, n_patches, mode);
}

std::vector<double> conditioning_values(int day_of_year, int row, int col,
                                        int n_rows, int n_cols,
                                        EncodingMode mode) {
  const double p_row = positional_encoding(row, 0, n_rows).first;
  const double p_col = positional_encoding(col, 0, n_cols).first;
  switch (mode) {
    case EncodingMode::kFull: {
      const auto [t_sin, t_cos] = seasonal_encoding(day_of_year);
      return {t_sin, t_cos, p_row, p_col};
    }
    case EncodingMode::kNoPosition: {
      const auto [t_sin, t_cos] = seasonal_encoding(day_of_year);
      return {t_sin, t_cos};
    }
    case EncodingMode::kLinearTime:
      return {linear_time_encoding(day_of_year), p_row, p_col};
    case EncodingMode::kLinearTimeNoPosition:
      return {linear_time_encoding(day_of_year)};
  }
  throw InvalidArgument("unknown encoding mode");
}

Tensor constant_planes(const std::vector<double>& values, int size) {
  if (size <= 0 || values.empty())
    throw InvalidArgument("constant_planes: invalid arguments");
  Tensor out({static_cast<int>(values.size()), size, size});
  const std::size_t plane = static_cast<std::size_t>(size) * size;
  for (std::size_t k = 0; k < values.size(); ++k) {
    float* dst = out.data() + k * plane;
    std::fill(dst, dst + plane, static_cast<float>(values[k]));
  }
  return out;
}

Tensor encoding_channels(const EncodingVector& vec, int size) {
  return constant_planes({vec.t_sin, vec.t_cos, vec.p_row, vec.p_col}, size);
}

EncodingMode encoding_mode_from_flags(bool no_position, bool linear_time) {
  if (linear_time)
    return no_position ? EncodingMode::kLinearTimeNoPosition
                       : EncodingMode::kLinearTime;
  return no_position ? EncodingMode::kNoPosition : EncodingMode::kFull;
}

std::string encoding_mode_name(EncodingMode mode) {
  switch (mode) {
    case EncodingMode::kFull: return "full";
    case EncodingMode::kNoPosition: return "no_position";
    case EncodingMode::kLinearTime: return "linear_time";
    case EncodingMode::kLinearTimeNoPosition: return "linear_time_no_position";
  }
  throw InvalidArgument("unknown encoding mode");
}

EncodingMode encoding_mode_from_name(const std::string& name) {
  if (name == "full") return EncodingMode::kFull;
  if (name == "no_position") return EncodingMode::kNoPosition;
  if (name == "linear_time") return EncodingMode::kLinearTime;
  if (name == "linear_time_no_position")
    return EncodingMode::kLinearTimeNoPosition;
  throw InvalidArgument("unknown encoding mode: " + name);
}

}  // namespace sitsmon
