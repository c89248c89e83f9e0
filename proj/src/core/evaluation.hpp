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
#include <vector>

#include "core/dates.hpp"

namespace sitsmon {

// One monitored image joined with its ground-truth label.
struct LabeledScore {
  Date date;
  double residual = 0.0;
  bool flag = false;
  bool label = false;
};

struct PrPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auprc = 0.0;
  long tp = 0, fp = 0, fn = 0, tn = 0;
  long n_images = 0;
  double hazard_fraction = 0.0;
  // Set when a zero denominator forced a metric to 0.
  std::string degenerate_note;
};

struct Prf1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::string degenerate_note;
};

Prf1 prf1(const std::vector<bool>& flags, const std::vector<bool>& labels);

// Average-precision AUPRC over residuals with grouped ties.
double auprc(const std::vector<double>& residuals, const std::vector<bool>& labels,
             std::vector<PrPoint>* curve = nullptr);

// Analytic coin-toss baseline: precision = P, recall = 0.5,
// F1 = P/(P+0.5), AUPRC = P.
MetricsReport random_baseline(double hazard_fraction);

MetricsReport compute_metrics(const std::vector<LabeledScore>& results,
                              std::vector<PrPoint>* curve = nullptr);

// Writes report.json, a human-readable table (report.txt) and the PR curve
// CSV. `parameter_count` < 0 omits the column.
void emit_report(const std::string& out_dir,
                 const std::vector<LabeledScore>& results,
                 const MetricsReport& baseline, long long parameter_count);

}  // namespace sitsmon
