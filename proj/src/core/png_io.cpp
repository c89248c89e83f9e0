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

#include "core/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "core/common.hpp"

namespace sitsmon {

namespace {

inline unsigned char ramp(double v) {
  return static_cast<unsigned char>(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5);
}

}  // namespace

void write_heatmap_png(const std::string& path, const TensorT<double>& map) {
  if (map.rank() != 2) throw InvalidArgument("write_heatmap_png: need HxW map");
  const int h = map.dim(0);
  const int w = map.dim(1);

  const std::string tmp = path + ".tmp";
  std::FILE* fp = std::fopen(tmp.c_str(), "wb");
  if (!fp) throw IoError("cannot create png: " + tmp);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    std::fclose(fp);
    throw IoError("png write failed: " + tmp);
  }

  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  std::vector<unsigned char> row(static_cast<std::size_t>(w) * 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = std::clamp(map[static_cast<std::size_t>(y) * w + x], 0.0, 1.0);
      // classic "hot" ramp: black -> red -> yellow -> white
      row[static_cast<std::size_t>(x) * 3 + 0] = ramp(3.0 * v);
      row[static_cast<std::size_t>(x) * 3 + 1] = ramp(3.0 * v - 1.0);
      row[static_cast<std::size_t>(x) * 3 + 2] = ramp(3.0 * v - 2.0);
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
  std::filesystem::rename(tmp, path);
}

}  // namespace sitsmon
