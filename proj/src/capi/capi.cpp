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

#include "sitsmon.h"

#include <exception>
#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/pipeline.hpp"

namespace {

thread_local std::string g_last_error;

sm_status fail(sm_status code, const char* what) {
  g_last_error = what;
  return code;
}

template <typename Fn>
sm_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SM_OK;
  } catch (const sitsmon::InvalidArgument& e) {
    return fail(SM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const sitsmon::IoError& e) {
    return fail(SM_ERR_IO, e.what());
  } catch (const sitsmon::DataError& e) {
    return fail(SM_ERR_DATA, e.what());
  } catch (const sitsmon::StateError& e) {
    return fail(SM_ERR_STATE, e.what());
  } catch (const std::exception& e) {
    return fail(SM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SM_ERR_INTERNAL, "unknown error");
  }
}

}  // namespace

struct sm_pipeline {
  sitsmon::RunConfig config;
};

extern "C" {

const char* sm_version(void) { return "0.1.0"; }

const char* sm_last_error(void) { return g_last_error.c_str(); }

sm_status sm_pipeline_create(const char* config_path,
                             const char* const* overrides, int n_overrides,
                             sm_pipeline** out) {
  if (!out) return fail(SM_ERR_INVALID_ARGUMENT, "out handle is null");
  *out = nullptr;
  return guarded([&] {
    if (n_overrides < 0 || (n_overrides > 0 && !overrides))
      throw sitsmon::InvalidArgument("bad overrides array");
    std::vector<std::string> ov;
    for (int i = 0; i < n_overrides; ++i) {
      if (!overrides[i]) throw sitsmon::InvalidArgument("null override entry");
      ov.emplace_back(overrides[i]);
    }
    const std::string path = config_path ? config_path : "";
    *out = new sm_pipeline{sitsmon::RunConfig::load(path, ov)};
  });
}

void sm_pipeline_destroy(sm_pipeline* p) { delete p; }

sm_status sm_pipeline_synth(sm_pipeline* p) {
  if (!p) return fail(SM_ERR_INVALID_ARGUMENT, "pipeline handle is null");
  return guarded([&] { sitsmon::cmd_synth(p->config); });
}

sm_status sm_pipeline_train(sm_pipeline* p) {
  if (!p) return fail(SM_ERR_INVALID_ARGUMENT, "pipeline handle is null");
  return guarded([&] { sitsmon::cmd_train(p->config); });
}

sm_status sm_pipeline_calibrate(sm_pipeline* p) {
  if (!p) return fail(SM_ERR_INVALID_ARGUMENT, "pipeline handle is null");
  return guarded([&] { sitsmon::cmd_calibrate(p->config); });
}

sm_status sm_pipeline_monitor(sm_pipeline* p, const char* images_dir,
                              int* out_any_flagged) {
  if (!p) return fail(SM_ERR_INVALID_ARGUMENT, "pipeline handle is null");
  if (!out_any_flagged)
    return fail(SM_ERR_INVALID_ARGUMENT, "out_any_flagged is null");
  return guarded([&] {
    const sitsmon::MonitorSummary s =
        sitsmon::cmd_monitor(p->config, images_dir ? images_dir : "");
    *out_any_flagged = s.flagged > 0 ? 1 : 0;
  });
}

sm_status sm_pipeline_evaluate(sm_pipeline* p, const char* labels_csv) {
  if (!p) return fail(SM_ERR_INVALID_ARGUMENT, "pipeline handle is null");
  return guarded([&] {
    sitsmon::cmd_evaluate(p->config, labels_csv ? labels_csv : "");
  });
}

}  // extern "C"
