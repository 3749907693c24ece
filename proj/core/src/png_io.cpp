// cmem/png_io.cpp

// Copyright 2026  The cmem Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cmem/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "cmem/common.hpp"

namespace cmem {

namespace {

struct FileCloser {
  std::FILE* f = nullptr;
  ~FileCloser() {
    if (f) std::fclose(f);
  }
};

}  // namespace

void write_png(const std::filesystem::path& path, const Tensor& image) {
  const bool rgb = image.rank() == 3;
  CMEM_CHECK(image.rank() == 2 || (rgb && image.dim(0) == 3))
      << "png: image must be [h, w] or [3, h, w], got " << image.shape_str();
  const std::size_t h = image.dim(rgb ? 1 : 0);
  const std::size_t w = image.dim(rgb ? 2 : 1);
  const std::size_t channels = rgb ? 3 : 1;

  // Interleave rows up front so no C++ object work happens under setjmp.
  std::vector<std::uint8_t> bytes(h * w * channels);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c)
      for (std::size_t ch = 0; ch < channels; ++ch) {
        const Scalar v = std::clamp(
            rgb ? image[(ch * h + r) * w + c] : image[r * w + c], 0.0, 1.0);
        bytes[(r * w + c) * channels + ch] =
            static_cast<std::uint8_t>(std::lround(v * 255.0));
      }
  std::vector<png_bytep> rows(h);
  for (std::size_t r = 0; r < h; ++r) rows[r] = bytes.data() + r * w * channels;

  FileCloser file;
  file.f = std::fopen(path.string().c_str(), "wb");
  CMEM_CHECK(file.f != nullptr) << "png: cannot open " << path.string()
                                << " for writing";
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  CMEM_CHECK(png != nullptr) << "png: write struct allocation failed";
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    CMEM_ERR << "png: info struct allocation failed";
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    CMEM_ERR << "png: libpng failed writing " << path.string();
  }
  png_init_io(png, file.f);
  png_set_IHDR(png, info, static_cast<png_uint_32>(w),
               static_cast<png_uint_32>(h), 8,
               rgb ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

Tensor read_png(const std::filesystem::path& path) {
  FileCloser file;
  file.f = std::fopen(path.string().c_str(), "rb");
  CMEM_CHECK(file.f != nullptr) << "png: cannot open " << path.string();
  unsigned char header[8];
  CMEM_CHECK(std::fread(header, 1, 8, file.f) == 8 &&
             png_sig_cmp(header, 0, 8) == 0)
      << "png: " << path.string() << " is not a PNG file";

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  CMEM_CHECK(png != nullptr) << "png: read struct allocation failed";
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    CMEM_ERR << "png: info struct allocation failed";
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    CMEM_ERR << "png: libpng failed reading " << path.string();
  }
  png_init_io(png, file.f);
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  // Normalize to 8-bit gray or RGB without alpha.
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_palette_to_rgb(png);
  png_set_expand_gray_1_2_4_to_8(png);
  png_read_update_info(png, info);

  const std::size_t h = png_get_image_height(png, info);
  const std::size_t w = png_get_image_width(png, info);
  const std::size_t channels = png_get_channels(png, info);
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    CMEM_ERR << "png: unsupported channel count " << channels << " in "
             << path.string();
  }
  std::vector<std::uint8_t> bytes(h * w * channels);
  std::vector<png_bytep> rows(h);
  for (std::size_t r = 0; r < h; ++r) rows[r] = bytes.data() + r * w * channels;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  if (channels == 1) {
    Tensor out({h, w});
    for (std::size_t i = 0; i < h * w; ++i) out[i] = bytes[i] / 255.0;
    return out;
  }
  Tensor out({3, h, w});
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c)
      for (std::size_t ch = 0; ch < 3; ++ch)
        out[(ch * h + r) * w + c] = bytes[(r * w + c) * 3 + ch] / 255.0;
  return out;
}

}  // namespace cmem
