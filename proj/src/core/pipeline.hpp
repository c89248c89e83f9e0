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

#include "core/config.hpp"
#include "core/evaluation.hpp"
#include "core/synthgen.hpp"

namespace sitsmon {

struct MonitorSummary {
  int images = 0;
  int flagged = 0;
};

// The three built-in disturbance events for generated scenes, scaled to the
// scene size and placed in the first monitored year.
std::vector<HazardSpec> default_hazards(const SceneConfig& config);

// Writes train/, test/, masks/ and labels.csv under config.data_dir.
void cmd_synth(const RunConfig& config);

// Fits normalization, baseline and the translation model from
// <data_dir>/train; persists every artifact under <artifact_dir>.
void cmd_train(const RunConfig& config);

// Scores the training images with the trained model and fits the decision
// threshold; writes training_scores.csv and threshold.json.
void cmd_calibrate(const RunConfig& config);

// Scores every image in `images_dir` (default <data_dir>/test), appends to
// scores.csv and writes per-image heatmaps.
MonitorSummary cmd_monitor(const RunConfig& config,
                           const std::string& images_dir = "");

// Joins scores.csv with a labels CSV by date and writes the metrics report.
MetricsReport cmd_evaluate(const RunConfig& config,
                           const std::string& labels_csv = "");

}  // namespace sitsmon
