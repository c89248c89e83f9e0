/* Copyright 2026 The sitsmon authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the satellite time-series change-monitoring pipeline.
 *
 * Every entry point returns an sm_status; on failure sm_last_error() holds
 * a human-readable message for the calling thread. Handles are opaque and
 * must be released with sm_pipeline_destroy().
 */

#ifndef SITSMON_H_
#define SITSMON_H_

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sm_status {
  SM_OK = 0,
  SM_ERR_INVALID_ARGUMENT = 1,
  SM_ERR_IO = 2,
  SM_ERR_DATA = 3,
  SM_ERR_STATE = 4,
  SM_ERR_INTERNAL = 5
} sm_status;

typedef struct sm_pipeline sm_pipeline;

/* Library version string, e.g. "0.1.0". */
const char* sm_version(void);

/* Message from the most recent failing call on this thread ("" if none). */
const char* sm_last_error(void);

/* Creates a pipeline from a config file (NULL or "" for built-in defaults)
 * plus n_overrides "key=value" strings applied on top. */
sm_status sm_pipeline_create(const char* config_path,
                             const char* const* overrides, int n_overrides,
                             sm_pipeline** out);

void sm_pipeline_destroy(sm_pipeline* p);

/* Generates a synthetic scene under the configured data directory. */
sm_status sm_pipeline_synth(sm_pipeline* p);

/* Trains the translation model from <data_dir>/train and persists all
 * artifacts under the configured artifact directory. */
sm_status sm_pipeline_train(sm_pipeline* p);

/* Scores the training period and fits the decision threshold. */
sm_status sm_pipeline_calibrate(sm_pipeline* p);

/* Scores every image in images_dir (NULL for <data_dir>/test). On success
 * *out_any_flagged is 1 if any image breached its threshold. */
sm_status sm_pipeline_monitor(sm_pipeline* p, const char* images_dir,
                              int* out_any_flagged);

/* Joins scores with labels_csv (NULL for <data_dir>/labels.csv) and writes
 * the metrics report. */
sm_status sm_pipeline_evaluate(sm_pipeline* p, const char* labels_csv);

#ifdef __cplusplus
}
#endif

#endif /* SITSMON_H_ */
