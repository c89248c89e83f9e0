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

// Reads a multiband float32 TIFF into a CxHxW tensor. Supports contiguous
// and planar layouts, float32 samples.
Tensor read_multiband_tiff(const std::string& path);

// Writes a CxHxW tensor as an uncompressed float32 TIFF (contiguous layout).
// A rank-2 HxW tensor is written as a single band. The write is atomic
// (temp file + rename).
void write_multiband_tiff(const std::string& path, const Tensor& bands);

}  // namespace sitsmon
