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

// Command-line front end; talks to the engine exclusively through the
// public C interface. Exit codes: 0 success (no hazard), 2 hazard flagged,
// 1 any error.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sitsmon.h"

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
  long long seed = -1;
  bool no_position = false;
  bool linear_time = false;
  bool mae_score = false;
  bool flat_threshold = false;
};

void add_common(CLI::App* cmd, CommonOpts* opts) {
  cmd->add_option("--config", opts->config_path, "Config file (TOML)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--set", opts->overrides,
                  "Override a config entry, e.g. --set train.epochs=5");
  cmd->add_option("--seed", opts->seed, "Random seed (overrides config)");
  cmd->add_flag("--no-position", opts->no_position,
                "Drop the positional conditioning channels");
  cmd->add_flag("--linear-time", opts->linear_time,
                "Linear day-of-year conditioning instead of sin/cos");
  cmd->add_flag("--mae-score", opts->mae_score,
                "Score with mean absolute error instead of structural difference");
  cmd->add_flag("--flat-threshold", opts->flat_threshold,
                "Season-independent decision threshold");
}

std::vector<std::string> resolve_overrides(const CommonOpts& opts) {
  std::vector<std::string> out = opts.overrides;
  if (opts.seed >= 0) out.push_back("seed=" + std::to_string(opts.seed));
  if (opts.no_position) out.push_back("ablation.no_position=true");
  if (opts.linear_time) out.push_back("ablation.linear_time=true");
  if (opts.mae_score) out.push_back("ablation.mae_score=true");
  if (opts.flat_threshold) out.push_back("ablation.flat_threshold=true");
  return out;
}

int report_error(const char* stage) {
  std::fprintf(stderr, "error: %s: %s\n", stage, sm_last_error());
  return 1;
}

class Pipeline {
 public:
  ~Pipeline() { sm_pipeline_destroy(handle_); }

  bool open(const CommonOpts& opts) {
    const std::vector<std::string> ov = resolve_overrides(opts);
    std::vector<const char*> ptrs;
    for (const auto& s : ov) ptrs.push_back(s.c_str());
    return sm_pipeline_create(opts.config_path.c_str(),
                              ptrs.empty() ? nullptr : ptrs.data(),
                              static_cast<int>(ptrs.size()), &handle_) == SM_OK;
  }

  sm_pipeline* get() { return handle_; }

 private:
  sm_pipeline* handle_ = nullptr;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Satellite image time-series change monitoring"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sm_version()));

  CommonOpts opts;
  std::string images_dir, labels_csv;

  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic scene");
  CLI::App* train = app.add_subcommand("train", "Fit the translation model");
  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Fit the decision threshold");
  CLI::App* monitor = app.add_subcommand("monitor", "Score new images");
  monitor->add_option("--images", images_dir,
                      "Directory of images to score (default <data_dir>/test)");
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Compare scores against labels");
  evaluate->add_option("--labels", labels_csv,
                       "Labels CSV (default <data_dir>/labels.csv)");

  for (CLI::App* cmd : {synth, train, calibrate, monitor, evaluate})
    add_common(cmd, &opts);

  CLI11_PARSE(app, argc, argv);

  Pipeline pipeline;
  if (!pipeline.open(opts)) return report_error("config");

  if (synth->parsed()) {
    if (sm_pipeline_synth(pipeline.get()) != SM_OK) return report_error("synth");
    std::printf("scene written\n");
  } else if (train->parsed()) {
    if (sm_pipeline_train(pipeline.get()) != SM_OK) return report_error("train");
    std::printf("model trained\n");
  } else if (calibrate->parsed()) {
    if (sm_pipeline_calibrate(pipeline.get()) != SM_OK)
      return report_error("calibrate");
    std::printf("threshold calibrated\n");
  } else if (monitor->parsed()) {
    int any_flagged = 0;
    if (sm_pipeline_monitor(pipeline.get(),
                            images_dir.empty() ? nullptr : images_dir.c_str(),
                            &any_flagged) != SM_OK)
      return report_error("monitor");
    std::printf(any_flagged ? "hazard flagged\n" : "no hazard flagged\n");
    return any_flagged ? 2 : 0;
  } else if (evaluate->parsed()) {
    if (sm_pipeline_evaluate(pipeline.get(),
                             labels_csv.empty() ? nullptr : labels_csv.c_str()) !=
        SM_OK)
      return report_error("evaluate");
    std::printf("report written\n");
  }
  return 0;
}
