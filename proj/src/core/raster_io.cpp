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

#include "core/raster_io.hpp"

#include <tiffio.h>

#include <cstdio>
#include <filesystem>
#include <memory>
#include <vector>

#include "core/common.hpp"

namespace sitsmon {

namespace {

struct TiffCloser {
  void operator()(TIFF* t) const {
    if (t) TIFFClose(t);
  }
};
using TiffPtr = std::unique_ptr<TIFF, TiffCloser>;

// libtiff reports recoverable issues through a global handler; keep quiet.
struct SuppressTiffWarnings {
  SuppressTiffWarnings() { TIFFSetWarningHandler(nullptr); }
};
const SuppressTiffWarnings g_quiet;

}  // namespace

Tensor read_multiband_tiff(const std::string& path) {
  TiffPtr tif(TIFFOpen(path.c_str(), "r"));
  if (!tif) throw IoError("cannot open raster: " + path);

  uint32_t w = 0, h = 0;
  uint16_t spp = 1, bps = 0, fmt = SAMPLEFORMAT_UINT, planar = PLANARCONFIG_CONTIG;
  TIFFGetField(tif.get(), TIFFTAG_IMAGEWIDTH, &w);
  TIFFGetField(tif.get(), TIFFTAG_IMAGELENGTH, &h);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_SAMPLESPERPIXEL, &spp);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_BITSPERSAMPLE, &bps);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_SAMPLEFORMAT, &fmt);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_PLANARCONFIG, &planar);

  if (w == 0 || h == 0) throw IoError("empty raster: " + path);
  if (bps != 32 || fmt != SAMPLEFORMAT_IEEEFP)
    throw IoError("unsupported sample type (need float32): " + path);

  const int channels = spp;
  Tensor out({channels, static_cast<int>(h), static_cast<int>(w)});
  const tmsize_t scan = TIFFScanlineSize(tif.get());
  std::vector<float> row(static_cast<std::size_t>(scan) / sizeof(float));

  if (planar == PLANARCONFIG_CONTIG) {
    for (uint32_t y = 0; y < h; ++y) {
      if (TIFFReadScanline(tif.get(), row.data(), y) < 0)
        throw IoError("scanline read failed: " + path);
      for (uint32_t x = 0; x < w; ++x)
        for (int c = 0; c < channels; ++c)
          out.at3(c, static_cast<int>(y), static_cast<int>(x)) =
              row[x * static_cast<uint32_t>(channels) + static_cast<uint32_t>(c)];
    }
  } else {
    for (int c = 0; c < channels; ++c) {
      for (uint32_t y = 0; y < h; ++y) {
        if (TIFFReadScanline(tif.get(), row.data(), y, static_cast<uint16_t>(c)) < 0)
          throw IoError("scanline read failed: " + path);
        for (uint32_t x = 0; x < w; ++x)
          out.at3(c, static_cast<int>(y), static_cast<int>(x)) = row[x];
      }
    }
  }
  return out;
}

void write_multiband_tiff(const std::string& path, const Tensor& bands) {
  if (bands.rank() != 3 && bands.rank() != 2)
    throw InvalidArgument("write_multiband_tiff: need CxHxW or HxW tensor");
  const int channels = bands.rank() == 3 ? bands.dim(0) : 1;
  const int h = bands.rank() == 3 ? bands.dim(1) : bands.dim(0);
  const int w = bands.rank() == 3 ? bands.dim(2) : bands.dim(1);

  const std::string tmp = path + ".tmp";
  {
    TiffPtr tif(TIFFOpen(tmp.c_str(), "w"));
    if (!tif) throw IoError("cannot create raster: " + tmp);

    TIFFSetField(tif.get(), TIFFTAG_IMAGEWIDTH, static_cast<uint32_t>(w));
    TIFFSetField(tif.get(), TIFFTAG_IMAGELENGTH, static_cast<uint32_t>(h));
    TIFFSetField(tif.get(), TIFFTAG_SAMPLESPERPIXEL, static_cast<uint16_t>(channels));
    TIFFSetField(tif.get(), TIFFTAG_BITSPERSAMPLE, static_cast<uint16_t>(32));
    TIFFSetField(tif.get(), TIFFTAG_SAMPLEFORMAT, SAMPLEFORMAT_IEEEFP);
    TIFFSetField(tif.get(), TIFFTAG_PLANARCONFIG, PLANARCONFIG_CONTIG);
    TIFFSetField(tif.get(), TIFFTAG_PHOTOMETRIC, PHOTOMETRIC_MINISBLACK);
    TIFFSetField(tif.get(), TIFFTAG_COMPRESSION, COMPRESSION_NONE);
    TIFFSetField(tif.get(), TIFFTAG_ROWSPERSTRIP, static_cast<uint32_t>(1));

    std::vector<float> row(static_cast<std::size_t>(w) * channels);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x)
        for (int c = 0; c < channels; ++c)
          row[static_cast<std::size_t>(x) * channels + c] =
              bands.rank() == 3 ? bands.at3(c, y, x)
                                : bands[static_cast<std::size_t>(y) * w + x];
      if (TIFFWriteScanline(tif.get(), row.data(), static_cast<uint32_t>(y)) < 0)
        throw IoError("scanline write failed: " + tmp);
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace sitsmon
