// cmem/image_grid.cpp

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

#include "cmem/image_grid.hpp"

#include "cmem/common.hpp"
#include "cmem/png_io.hpp"

namespace cmem {

namespace {
constexpr Scalar kSeparatorGray = 0.5;
}  // namespace

Tensor tile_grid(const std::vector<Tensor>& images, std::size_t cols) {
  CMEM_CHECK(!images.empty()) << "tile_grid: no images";
  CMEM_CHECK(cols > 0) << "tile_grid: cols must be positive";
  const Shape& s0 = images.front().shape();
  const bool color = s0.size() == 3;
  CMEM_CHECK(color ? s0[0] == 3 : s0.size() == 2)
      << "tile_grid: images must be [h, w] or [3, h, w], got "
      << shape_to_string(s0);
  for (const Tensor& im : images)
    CMEM_CHECK(im.same_shape(images.front()))
        << "tile_grid: mixed image shapes " << im.shape_str() << " vs "
        << shape_to_string(s0);

  const std::size_t c = color ? 3 : 1;
  const std::size_t h = color ? s0[1] : s0[0];
  const std::size_t w = color ? s0[2] : s0[1];
  const std::size_t rows = (images.size() + cols - 1) / cols;
  const std::size_t gh = rows * h + (rows + 1) * kGridSeparator;
  const std::size_t gw = cols * w + (cols + 1) * kGridSeparator;

  Shape gs = color ? Shape{3, gh, gw} : Shape{gh, gw};
  Tensor grid(gs, std::vector<Scalar>(c * gh * gw, kSeparatorGray));
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::size_t r0 = kGridSeparator + (i / cols) * (h + kGridSeparator);
    const std::size_t c0 = kGridSeparator + (i % cols) * (w + kGridSeparator);
    const Tensor& im = images[i];
    for (std::size_t ch = 0; ch < c; ++ch)
      for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x)
          grid[(ch * gh + r0 + y) * gw + c0 + x] = im[(ch * h + y) * w + x];
  }
  return grid;
}

void render_grid(const std::vector<Tensor>& images, std::size_t cols,
                 const std::filesystem::path& path) {
  write_png(path, tile_grid(images, cols));
}

}  // namespace cmem
