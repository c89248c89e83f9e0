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

#include "core/threshold.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include <json.hpp>

#include "core/common.hpp"

namespace sitsmon {

namespace {

struct CircularDesignRow {
  double s, c;  // sin/cos terms
};

CircularDesignRow design_row(double t) {
  const double angle = 2.0 * M_PI * t / 365.0;
  return {std::sin(angle), std::cos(angle)};
}

// Solves the 3x3 normal equations for y ~ a*sin + b*cos + c.
std::array<double, 3> circular_least_squares(
    const std::vector<std::pair<double, double>>& t_y) {
  if (t_y.size() < 3)
    throw InvalidArgument("circular regression: need at least 3 points");

  double A[3][3] = {{0}};
  double b[3] = {0};
  for (const auto& [t, y] : t_y) {
    const auto r = design_row(t);
    const double row[3] = {r.s, r.c, 1.0};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) A[i][j] += row[i] * row[j];
      b[i] += row[i] * y;
    }
  }

  // Gaussian elimination with partial pivoting.
  int perm[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(A[perm[r]][col]) > std::abs(A[perm[piv]][col])) piv = r;
    std::swap(perm[col], perm[piv]);
    const double p = A[perm[col]][col];
    if (std::abs(p) < 1e-12 * static_cast<double>(t_y.size()))
      throw DataError("circular regression: rank-deficient design "
                      "(scores concentrated on too few distinct days)");
    for (int r = col + 1; r < 3; ++r) {
      const double f = A[perm[r]][col] / p;
      for (int j = col; j < 3; ++j) A[perm[r]][j] -= f * A[perm[col]][j];
      b[perm[r]] -= f * b[perm[col]];
    }
  }
  std::array<double, 3> x{};
  for (int col = 2; col >= 0; --col) {
    double acc = b[perm[col]];
    for (int j = col + 1; j < 3; ++j) acc -= A[perm[col]][j] * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(col)] = acc / A[perm[col]][col];
  }
  return x;
}

}  // namespace

std::array<double, 3> fit_mean_regression(
    const std::vector<std::pair<int, double>>& day_scores) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(day_scores.size());
  for (const auto& [day, score] : day_scores)
    pts.emplace_back(static_cast<double>(day), score);
  return circular_least_squares(pts);
}

std::array<double, 3> fit_std_regression(
    const std::vector<std::pair<Date, double>>& dated_scores) {
  // Pool by calendar month across years.
  std::map<int, std::vector<double>> by_month;
  for (const auto& [date, score] : dated_scores)
    by_month[date.month].push_back(score);

  std::vector<std::pair<double, double>> pts;
  for (const auto& [month, scores] : by_month) {
    if (scores.size() < 2) continue;  // no sample std from one point
    double mean = 0.0;
    for (double s : scores) mean += s;
    mean /= static_cast<double>(scores.size());
    double ss = 0.0;
    for (double s : scores) ss += (s - mean) * (s - mean);
    const double stddev = std::sqrt(ss / static_cast<double>(scores.size() - 1));
    pts.emplace_back(static_cast<double>(mid_month_day(month)), stddev);
  }
  if (pts.size() < 3)
    throw DataError("std regression: need >= 3 calendar months with >= 2 scores");
  return circular_least_squares(pts);
}

ThresholdModel fit_seasonal_threshold(
    const std::vector<std::pair<Date, double>>& dated_scores, double multiplier) {
  std::vector<std::pair<int, double>> day_scores;
  day_scores.reserve(dated_scores.size());
  for (const auto& [date, score] : dated_scores)
    day_scores.emplace_back(encoding_day(date), score);

  ThresholdModel model;
  model.kind = ThresholdModel::Kind::kSeasonal;
  model.multiplier = multiplier;
  model.mean_coeffs = fit_mean_regression(day_scores);
  model.std_coeffs = fit_std_regression(dated_scores);
  return model;
}

ThresholdModel fit_flat_threshold(const std::vector<double>& scores,
                                  double multiplier) {
  if (scores.empty()) throw InvalidArgument("flat threshold: no scores");
  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= static_cast<double>(scores.size());
  double ss = 0.0;
  for (double s : scores) ss += (s - mean) * (s - mean);
  const double stddev =
      scores.size() > 1 ? std::sqrt(ss / static_cast<double>(scores.size() - 1)) : 0.0;

  ThresholdModel model;
  model.kind = ThresholdModel::Kind::kFlat;
  model.multiplier = multiplier;
  model.flat_value = mean + multiplier * stddev;
  return model;
}

double tau(int day_of_year, const ThresholdModel& model) {
  if (model.kind == ThresholdModel::Kind::kFlat) return model.flat_value;
  // Periodic in t with period 365 by construction.
  const double t = static_cast<double>(day_of_year);
  const auto r = design_row(t);
  const double m = model.mean_coeffs[0] * r.s + model.mean_coeffs[1] * r.c +
                   model.mean_coeffs[2];
  const double s = model.std_coeffs[0] * r.s + model.std_coeffs[1] * r.c +
                   model.std_coeffs[2];
  return m + model.multiplier * s;
}

std::pair<double, bool> residual_and_flag(double score, int day_of_year,
                                          const ThresholdModel& model) {
  const double residual = score - tau(day_of_year, model);
  return {residual, residual > 0.0};
}

void save_threshold(const std::string& path, const ThresholdModel& model) {
  nlohmann::json j;
  j["kind"] = model.kind == ThresholdModel::Kind::kFlat ? "flat" : "seasonal";
  j["mean_coeffs"] = model.mean_coeffs;
  j["std_coeffs"] = model.std_coeffs;
  j["multiplier"] = model.multiplier;
  j["flat_value"] = model.flat_value;
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write threshold: " + tmp);
    out << j.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

ThresholdModel load_threshold(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StateError("missing threshold model: " + path);
  nlohmann::json j;
  in >> j;
  ThresholdModel model;
  model.kind = j.at("kind").get<std::string>() == "flat"
                   ? ThresholdModel::Kind::kFlat
                   : ThresholdModel::Kind::kSeasonal;
  const auto mc = j.at("mean_coeffs").get<std::vector<double>>();
  const auto sc = j.at("std_coeffs").get<std::vector<double>>();
  if (mc.size() != 3 || sc.size() != 3)
    throw StateError("threshold model: bad coefficient arrays");
  std::copy(mc.begin(), mc.end(), model.mean_coeffs.begin());
  std::copy(sc.begin(), sc.end(), model.std_coeffs.begin());
  model.multiplier = j.at("multiplier").get<double>();
  model.flat_value = j.value("flat_value", 0.0);
  return model;
}

}  // namespace sitsmon
