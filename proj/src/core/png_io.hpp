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

#include "core/tensor.hpp"

namespace sitsmon {

// Renders an HxW map as an 8-bit RGB PNG with a fixed "hot" color ramp.
// Values are clamped to [0, 1] with fixed scaling (never per-image
// autoscale) so frames stay comparable across time.
void write_heatmap_png(const std::string& path, const TensorT<double>& map);

}  // namespace sitsmon
