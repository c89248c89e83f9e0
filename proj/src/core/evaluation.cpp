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

#include "core/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "core/common.hpp"

namespace sitsmon {

namespace {

void atomic_write(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write: " + tmp);
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

Prf1 prf1(const std::vector<bool>& flags, const std::vector<bool>& labels) {
  if (flags.size() != labels.size())
    throw InvalidArgument("prf1: flag/label length mismatch");
  if (flags.empty()) throw InvalidArgument("prf1: empty input");

  long tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i] && labels[i]) ++tp;
    else if (flags[i] && !labels[i]) ++fp;
    else if (!flags[i] && labels[i]) ++fn;
  }

  Prf1 out;
  if (tp + fp == 0) {
    out.degenerate_note = "no positive predictions; precision reported as 0";
  } else {
    out.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  if (tp + fn == 0) {
    out.degenerate_note += out.degenerate_note.empty() ? "" : "; ";
    out.degenerate_note += "no positive labels; recall reported as 0";
  } else {
    out.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  }
  if (out.precision + out.recall > 0.0)
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  return out;
}

double auprc(const std::vector<double>& residuals, const std::vector<bool>& labels,
             std::vector<PrPoint>* curve) {
  if (residuals.size() != labels.size() || residuals.empty())
    throw InvalidArgument("auprc: bad input lengths");
  const long total_pos = std::count(labels.begin(), labels.end(), true);
  if (total_pos == 0) throw InvalidArgument("auprc: no positive labels");

  std::vector<std::size_t> idx(residuals.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return residuals[a] > residuals[b];
  });

  if (curve) curve->clear();
  double ap = 0.0;
  long cum_tp = 0, cum_fp = 0;
  std::size_t i = 0;
  while (i < idx.size()) {
    // group ties
    std::size_t j = i;
    long g_tp = 0, g_fp = 0;
    while (j < idx.size() && residuals[idx[j]] == residuals[idx[i]]) {
      if (labels[idx[j]]) ++g_tp;
      else ++g_fp;
      ++j;
    }
    cum_tp += g_tp;
    cum_fp += g_fp;
    const double precision =
        static_cast<double>(cum_tp) / static_cast<double>(cum_tp + cum_fp);
    const double recall =
        static_cast<double>(cum_tp) / static_cast<double>(total_pos);
    ap += (static_cast<double>(g_tp) / static_cast<double>(total_pos)) * precision;
    if (curve) curve->push_back({residuals[idx[i]], precision, recall});
    i = j;
  }
  return ap;
}

MetricsReport random_baseline(double hazard_fraction) {
  if (!(hazard_fraction > 0.0 && hazard_fraction <= 1.0))
    throw InvalidArgument("random_baseline: P must be in (0, 1]");
  MetricsReport r;
  r.precision = hazard_fraction;
  r.recall = 0.5;
  r.f1 = hazard_fraction / (hazard_fraction + 0.5);
  r.auprc = hazard_fraction;
  r.hazard_fraction = hazard_fraction;
  return r;
}

MetricsReport compute_metrics(const std::vector<LabeledScore>& results,
                              std::vector<PrPoint>* curve) {
  if (results.empty()) throw InvalidArgument("compute_metrics: empty results");

  std::vector<bool> flags, labels;
  std::vector<double> residuals;
  for (const auto& r : results) {
    flags.push_back(r.flag);
    labels.push_back(r.label);
    residuals.push_back(r.residual);
  }

  MetricsReport report;
  const Prf1 p = prf1(flags, labels);
  report.precision = p.precision;
  report.recall = p.recall;
  report.f1 = p.f1;
  report.degenerate_note = p.degenerate_note;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i] && labels[i]) ++report.tp;
    else if (flags[i]) ++report.fp;
    else if (labels[i]) ++report.fn;
    else ++report.tn;
  }
  report.n_images = static_cast<long>(results.size());
  const long pos = report.tp + report.fn;
  report.hazard_fraction =
      static_cast<double>(pos) / static_cast<double>(results.size());
  if (pos > 0) {
    report.auprc = auprc(residuals, labels, curve);
  } else if (curve) {
    curve->clear();
  }
  return report;
}

void emit_report(const std::string& out_dir,
                 const std::vector<LabeledScore>& results,
                 const MetricsReport& baseline, long long parameter_count) {
  if (results.empty()) throw InvalidArgument("emit_report: empty results");
  std::filesystem::create_directories(out_dir);

  std::vector<PrPoint> curve;
  const MetricsReport metrics = compute_metrics(results, &curve);

  nlohmann::json j;
  j["schema_version"] = 1;
  j["auprc_rule"] = "average_precision_grouped_ties";
  auto fill = [parameter_count](const MetricsReport& m) {
    nlohmann::json o{{"f1", m.f1},
                     {"precision", m.precision},
                     {"recall", m.recall},
                     {"auprc", m.auprc},
                     {"tp", m.tp},
                     {"fp", m.fp},
                     {"fn", m.fn},
                     {"tn", m.tn},
                     {"n_images", m.n_images},
                     {"hazard_fraction", m.hazard_fraction}};
    if (!m.degenerate_note.empty()) o["note"] = m.degenerate_note;
    (void)parameter_count;
    return o;
  };
  j["model"] = fill(metrics);
  if (parameter_count >= 0) j["model"]["parameter_count"] = parameter_count;
  j["random_baseline"] = {{"f1", baseline.f1},
                          {"precision", baseline.precision},
                          {"recall", baseline.recall},
                          {"auprc", baseline.auprc}};
  atomic_write(out_dir + "/report.json", j.dump(2) + "\n");

  // Human-readable table.
  char line[256];
  std::string txt = "model           #params       F1  precision    recall     AUPRC\n";
  std::snprintf(line, sizeof(line), "%-15s %8s %8.3f %10.3f %9.3f %9.3f\n",
                "random-guess", "-", baseline.f1, baseline.precision,
                baseline.recall, baseline.auprc);
  txt += line;
  std::string params = "-";
  if (parameter_count >= 0) params = std::to_string(parameter_count);
  std::snprintf(line, sizeof(line), "%-15s %8s %8.3f %10.3f %9.3f %9.3f\n",
                "this-run", params.c_str(), metrics.f1, metrics.precision,
                metrics.recall, metrics.auprc);
  txt += line;
  atomic_write(out_dir + "/report.txt", txt);

  std::string csv = "threshold,precision,recall\n";
  for (const auto& p : curve) {
    std::snprintf(line, sizeof(line), "%.9g,%.9g,%.9g\n", p.threshold,
                  p.precision, p.recall);
    csv += line;
  }
  atomic_write(out_dir + "/pr_curve.csv", csv);
}

}  // namespace sitsmon
