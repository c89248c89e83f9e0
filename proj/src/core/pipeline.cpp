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

#include "core/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "core/common.hpp"
#include "core/hash.hpp"
#include "core/png_io.hpp"
#include "core/raster_io.hpp"
#include "core/scoring.hpp"
#include "core/siu_net.hpp"
#include "core/threshold.hpp"

namespace sitsmon {

namespace {

namespace fs = std::filesystem;

void atomic_write(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write: " + tmp);
    out << text;
  }
  fs::rename(tmp, path);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_run_config(const RunConfig& config) {
  fs::create_directories(config.artifact_dir);
  atomic_write(config.artifact_dir + "/run_config.toml", config.to_toml());
}

std::string weights_path(const RunConfig& c) { return c.artifact_dir + "/checkpoint.bin"; }
std::string manifest_path(const RunConfig& c) { return c.artifact_dir + "/manifest.json"; }
std::string stats_path(const RunConfig& c) { return c.artifact_dir + "/norm_stats.json"; }
std::string baseline_path(const RunConfig& c) { return c.artifact_dir + "/baseline.tif"; }
std::string threshold_path(const RunConfig& c) { return c.artifact_dir + "/threshold.json"; }
std::string scores_path(const RunConfig& c) { return c.artifact_dir + "/scores.csv"; }

struct LoadedModel {
  std::unique_ptr<SiuNet> model;
  Checkpoint meta;
  NormStats stats;
  BaselineImage baseline;
};

// Loads the trained artifacts and cross-checks that norm_stats.json still
// matches the digest recorded at training time.
LoadedModel load_artifacts(const RunConfig& config) {
  LoadedModel out;
  auto [model, meta] = load_checkpoint(weights_path(config), manifest_path(config));
  out.model = std::move(model);
  out.meta = meta;
  const std::string digest = file_digest(stats_path(config));
  if (digest != meta.norm_stats_digest)
    throw StateError("norm_stats.json does not match the trained model (digest " +
                     digest + " vs " + meta.norm_stats_digest + ")");
  out.stats = load_norm_stats(stats_path(config));
  out.baseline.bands = read_multiband_tiff(baseline_path(config));
  return out;
}

void clamp_unit(Tensor* t) {
  for (std::size_t i = 0; i < t->size(); ++i)
    t->data()[i] = std::clamp(t->data()[i], 0.0f, 1.0f);
}

double score_image(const Tensor& pred, const Tensor& obs, const RunConfig& config) {
  return config.mae_score ? mae_score(pred, obs) : sdim_score(pred, obs, config.ssim);
}

TensorT<double> map_image(const Tensor& pred, const Tensor& obs,
                          const RunConfig& config) {
  return config.mae_score ? mae_map(pred, obs) : sdim_map(pred, obs, config.ssim);
}

long long read_parameter_count(const RunConfig& config) {
  std::ifstream in(manifest_path(config));
  if (!in) return -1;
  nlohmann::json j;
  in >> j;
  if (!j.contains("parameter_count")) return -1;
  return j["parameter_count"].get<long long>();
}

struct ScoreRow {
  Date date;
  double score = 0.0;
  double threshold = 0.0;
  double residual = 0.0;
  bool flag = false;
};

std::vector<ScoreRow> read_scores_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scores file: " + path);
  std::vector<ScoreRow> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("date,", 0) == 0) continue;
    }
    std::istringstream ls(line);
    std::string date_s, score_s, thr_s, res_s, flag_s;
    if (!std::getline(ls, date_s, ',') || !std::getline(ls, score_s, ',') ||
        !std::getline(ls, thr_s, ',') || !std::getline(ls, res_s, ',') ||
        !std::getline(ls, flag_s, ','))
      throw DataError("malformed scores row: " + line);
    ScoreRow row;
    row.date = parse_iso_date(date_s);
    row.score = std::stod(score_s);
    row.threshold = std::stod(thr_s);
    row.residual = std::stod(res_s);
    row.flag = flag_s == "1" || flag_s == "true";
    rows.push_back(row);
  }
  if (rows.empty()) throw DataError("no score rows in " + path);
  return rows;
}

std::map<std::string, bool> read_labels_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open labels file: " + path);
  std::map<std::string, bool> labels;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("date,", 0) == 0) continue;
    }
    std::istringstream ls(line);
    std::string date_s, label_s;
    if (!std::getline(ls, date_s, ',') || !std::getline(ls, label_s, ','))
      throw DataError("malformed labels row: " + line);
    parse_iso_date(date_s);  // validate
    labels[date_s] = label_s == "1" || label_s == "true";
  }
  if (labels.empty()) throw DataError("no label rows in " + path);
  return labels;
}

}  // namespace

std::vector<HazardSpec> default_hazards(const SceneConfig& config) {
  const int h = config.height, w = config.width;
  const int m = std::min(h, w);
  const long long t0 = days_from_civil(config.test_start());
  auto onset = [&](int offset) { return civil_from_days(t0 + offset); };

  HazardSpec abrupt;
  abrupt.kind = HazardKind::kAbruptBlob;
  abrupt.onset = onset(45);
  abrupt.duration_days = 60;
  abrupt.center_row = h / 4;
  abrupt.center_col = w / 4;
  abrupt.radius = std::max(6, m / 10);
  abrupt.magnitude = 0.45;

  HazardSpec gradual;
  gradual.kind = HazardKind::kGradualGrowth;
  gradual.onset = onset(150);
  gradual.duration_days = 40;
  gradual.center_row = 3 * h / 4;
  gradual.center_col = 3 * w / 4;
  gradual.radius = std::max(8, m / 8);
  gradual.magnitude = 0.45;

  HazardSpec shift;
  shift.kind = HazardKind::kOutOfSeasonShift;
  shift.onset = onset(255);
  shift.duration_days = 50;
  shift.center_row = h / 4;
  shift.center_col = 3 * w / 4;
  shift.radius = std::max(6, m / 10);
  shift.magnitude = 0.45;

  return {abrupt, gradual, shift};
}

void cmd_synth(const RunConfig& config) {
  write_run_config(config);
  SceneConfig scene = config.synth;
  if (config.synth_hazards == "default") scene.hazards = default_hazards(scene);
  scene.validate();
  write_scene(scene, config.data_dir);
}

void cmd_train(const RunConfig& config) {
  write_run_config(config);
  const EncodingMode mode = config.encoding_mode();

  SitsDataset data = load_sits_directory(config.data_dir + "/train",
                                         config.channels, config.patch,
                                         config.band_order);
  if (data.size() < 2) throw DataError("train: need at least 2 images");

  const NormStats stats = compute_norm_stats(data, config.per_channel_norm);
  save_norm_stats(stats_path(config), stats);
  for (auto& img : data.images) img = normalize(img, stats);

  const int gh = data.images[0].height() / config.patch;
  const int gw = data.images[0].width() / config.patch;
  const std::size_t n_pos = static_cast<std::size_t>(gh) * gw;
  const std::size_t n_samples = data.size() * n_pos;

  auto [train_idx, val_idx] =
      split_indices(n_samples, config.val_fraction, config.train.seed);

  std::vector<std::vector<bool>> include(
      data.size(), std::vector<bool>(n_pos, false));
  std::vector<bool> is_train(n_samples, false);
  for (std::size_t i : train_idx) {
    is_train[i] = true;
    include[i / n_pos][i % n_pos] = true;
  }

  BaselineImage baseline =
      compute_baseline_masked(data, include, config.patch);

  std::vector<PatchSample> train_samples, val_samples;
  train_samples.reserve(train_idx.size());
  val_samples.reserve(val_idx.size());
  std::size_t flat = 0;
  for (const auto& img : data.images) {
    std::vector<PatchSample> grid = extract_patch_grid(img, baseline, config.patch);
    for (auto& sample : grid) {
      (is_train[flat] ? train_samples : val_samples).push_back(std::move(sample));
      ++flat;
    }
  }

  ModelConfig mcfg;
  mcfg.in_channels = config.channels;
  mcfg.enc_channels = encoding_channel_count(mode);
  mcfg.widths = {config.widths[0], config.widths[1], config.widths[2]};
  mcfg.patch = config.patch;
  SiuNet model(mcfg, config.train.seed);

  const TrainingHistory history = train_model(model, train_samples, val_samples,
                                              config.train, mode, gh, gw);

  write_multiband_tiff(baseline_path(config), baseline.bands);

  Checkpoint meta;
  meta.config = mcfg;
  meta.encoding_mode = mode;
  meta.norm_stats_digest = file_digest(stats_path(config));
  meta.history = history;
  meta.init_seed = config.train.seed;
  meta.probe_output = probe_forward(model);
  save_checkpoint(weights_path(config), manifest_path(config), model, meta);
}

void cmd_calibrate(const RunConfig& config) {
  write_run_config(config);
  LoadedModel art = load_artifacts(config);

  SitsDataset data = load_sits_directory(config.data_dir + "/train",
                                         config.channels, config.patch,
                                         config.band_order);

  std::vector<std::pair<Date, double>> dated_scores;
  std::string csv = "date,day_of_year,score\n";
  for (const auto& raw : data.images) {
    const SitsImage img = normalize(raw, art.stats);
    const int doy = encoding_day(img.date);
    Tensor pred = generate_image(*art.model, art.baseline, doy, art.meta.encoding_mode);
    clamp_unit(&pred);
    const double score = score_image(pred, img.bands, config);
    dated_scores.emplace_back(img.date, score);
    csv += to_iso_string(img.date) + "," + std::to_string(doy) + "," +
           fmt_double(score) + "\n";
  }
  atomic_write(config.artifact_dir + "/training_scores.csv", csv);

  ThresholdModel threshold;
  if (config.flat_threshold) {
    std::vector<double> scores;
    for (const auto& [date, s] : dated_scores) scores.push_back(s);
    threshold = fit_flat_threshold(scores, config.threshold_multiplier);
  } else {
    threshold = fit_seasonal_threshold(dated_scores, config.threshold_multiplier);
  }
  save_threshold(threshold_path(config), threshold);
}

MonitorSummary cmd_monitor(const RunConfig& config, const std::string& images_dir) {
  write_run_config(config);
  LoadedModel art = load_artifacts(config);
  const ThresholdModel threshold = load_threshold(threshold_path(config));

  const std::string dir =
      images_dir.empty() ? config.data_dir + "/test" : images_dir;
  SitsDataset data = load_sits_directory(dir, config.channels, config.patch,
                                         config.band_order);

  const std::string heat_dir = config.artifact_dir + "/heatmaps";
  fs::create_directories(heat_dir);

  // scores.csv accumulates across monitor calls; rewrite atomically.
  std::string csv;
  if (fs::exists(scores_path(config))) {
    std::ifstream in(scores_path(config), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    csv = buf.str();
  }
  if (csv.empty()) csv = "date,score,threshold,residual,flag\n";

  MonitorSummary summary;
  for (const auto& raw : data.images) {
    const SitsImage img = normalize(raw, art.stats);
    const int doy = encoding_day(img.date);
    Tensor pred = generate_image(*art.model, art.baseline, doy, art.meta.encoding_mode);
    clamp_unit(&pred);

    AnomalyResult r;
    r.date = img.date;
    r.day_of_year = doy;
    r.score = score_image(pred, img.bands, config);
    r.threshold = tau(doy, threshold);
    std::tie(r.residual, r.flag) = residual_and_flag(r.score, doy, threshold);
    r.heatmap = map_image(pred, img.bands, config);

    const std::string stem = heat_dir + "/heatmap_" + to_iso_string(img.date);
    write_multiband_tiff(stem + ".tif", r.heatmap.cast<float>());
    write_heatmap_png(stem + ".png", r.heatmap);

    csv += to_iso_string(img.date) + "," + fmt_double(r.score) + "," +
           fmt_double(r.threshold) + "," + fmt_double(r.residual) + "," +
           (r.flag ? "1" : "0") + "\n";
    ++summary.images;
    if (r.flag) ++summary.flagged;
  }
  atomic_write(scores_path(config), csv);
  return summary;
}

MetricsReport cmd_evaluate(const RunConfig& config, const std::string& labels_csv) {
  write_run_config(config);
  const std::string labels_file =
      labels_csv.empty() ? config.data_dir + "/labels.csv" : labels_csv;

  const std::vector<ScoreRow> rows = read_scores_csv(scores_path(config));
  std::map<std::string, bool> labels = read_labels_csv(labels_file);

  std::vector<LabeledScore> joined;
  for (const auto& row : rows) {
    const std::string key = to_iso_string(row.date);
    auto it = labels.find(key);
    if (it == labels.end())
      throw DataError("no label for scored date " + key);
    joined.push_back({row.date, row.residual, row.flag, it->second});
    labels.erase(it);
  }
  if (!labels.empty())
    throw DataError("label without score for date " + labels.begin()->first);

  long positives = 0;
  for (const auto& j : joined)
    if (j.label) ++positives;
  if (positives == 0) throw DataError("labels contain no hazardous images");
  const double fraction =
      static_cast<double>(positives) / static_cast<double>(joined.size());

  const MetricsReport baseline = random_baseline(fraction);
  emit_report(config.artifact_dir + "/reports", joined, baseline,
              read_parameter_count(config));

  std::vector<PrPoint> curve;
  return compute_metrics(joined, &curve);
}

}  // namespace sitsmon
