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

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "core/dates.hpp"

namespace sitsmon {

// Seasonal decision boundary tau(t) = m(t) + multiplier * s(t), where both
// m and s are circular regressions a*sin(2*pi*t/365) + b*cos(...) + c.
struct ThresholdModel {
  enum class Kind { kSeasonal, kFlat };

  Kind kind = Kind::kSeasonal;
  std::array<double, 3> mean_coeffs = {0.0, 0.0, 0.0};  // a1, b1, c1
  std::array<double, 3> std_coeffs = {0.0, 0.0, 0.0};   // a2, b2, c2
  double multiplier = 1.64;  // one-tailed 95th percentile of a normal
  double flat_value = 0.0;
};

// Least-squares fit of score ~ a*sin(2*pi*t/365) + b*cos(...) + c.
std::array<double, 3> fit_mean_regression(
    const std::vector<std::pair<int, double>>& day_scores);

// Sample std (n-1) of scores per calendar month pooled across years,
// anchored at the mid-month day of year, then the same circular fit.
// Months with fewer than 2 scores are skipped; needs >= 3 usable months.
std::array<double, 3> fit_std_regression(
    const std::vector<std::pair<Date, double>>& dated_scores);

ThresholdModel fit_seasonal_threshold(
    const std::vector<std::pair<Date, double>>& dated_scores,
    double multiplier = 1.64);

// Flat ablation: mean + multiplier * std of the training scores.
ThresholdModel fit_flat_threshold(const std::vector<double>& scores,
                                  double multiplier = 1.64);

double tau(int day_of_year, const ThresholdModel& model);

// residual = score - tau(t); flag on strict > 0.
std::pair<double, bool> residual_and_flag(double score, int day_of_year,
                                          const ThresholdModel& model);

void save_threshold(const std::string& path, const ThresholdModel& model);
ThresholdModel load_threshold(const std::string& path);

}  // namespace sitsmon
