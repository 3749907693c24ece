// tests/test_image_grid.cpp

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

#include <filesystem>
#include <vector>

#include "cmem/common.hpp"
#include "cmem/image_grid.hpp"
#include "cmem/png_io.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using namespace cmem;

TEST_CASE("sixteen images in four columns give the expected canvas size") {
  std::vector<Tensor> images(16, Tensor::full({28, 56}, 1.0));
  Tensor grid = tile_grid(images, 4);
  // 4 rows/cols of cells plus 5 separators of 2 px each direction.
  CHECK(grid.shape() == Shape{4 * 28 + 5 * 2, 4 * 56 + 5 * 2});
}

TEST_CASE("a single image becomes that image plus a border") {
  Tensor img({2, 3}, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
  Tensor grid = tile_grid({img}, 1);
  REQUIRE(grid.shape() == Shape{2 + 4, 3 + 4});
  const std::size_t gw = 7;
  for (std::size_t y = 0; y < 2; ++y)
    for (std::size_t x = 0; x < 3; ++x)
      CHECK(grid[(2 + y) * gw + 2 + x] == img[y * 3 + x]);
  // Border stays separator gray.
  CHECK(grid[0] == 0.5);
  CHECK(grid[1 * gw + 1] == 0.5);
  CHECK(grid[5 * gw + 6] == 0.5);
}

TEST_CASE("separator rows and columns sit between adjacent cells") {
  std::vector<Tensor> images(4, Tensor::full({3, 3}, 1.0));
  Tensor grid = tile_grid(images, 2);
  REQUIRE(grid.shape() == Shape{2 * 3 + 3 * 2, 2 * 3 + 3 * 2});
  const std::size_t gw = 12;
  // Column gap between the two cells of the first row: x in {5, 6}.
  CHECK(grid[2 * gw + 5] == 0.5);
  CHECK(grid[2 * gw + 6] == 0.5);
  // Row gap between the two rows of cells: y in {5, 6}.
  CHECK(grid[5 * gw + 2] == 0.5);
  CHECK(grid[6 * gw + 2] == 0.5);
  // Cell interiors carry the image value.
  CHECK(grid[2 * gw + 2] == 1.0);
  CHECK(grid[7 * gw + 7] == 1.0);
}

TEST_CASE("a ragged final row leaves the unused cells gray") {
  std::vector<Tensor> images(5, Tensor::full({2, 2}, 1.0));
  Tensor grid = tile_grid(images, 4);
  REQUIRE(grid.shape() == Shape{2 * 2 + 3 * 2, 4 * 2 + 5 * 2});
  const std::size_t gw = 18;
  // Second cell of row 1 was never filled.
  CHECK(grid[6 * gw + 6] == 0.5);
  // First cell of row 1 was.
  CHECK(grid[6 * gw + 2] == 1.0);
}

TEST_CASE("color images tile per channel") {
  Tensor img({3, 2, 2});
  for (std::size_t i = 0; i < img.numel(); ++i) img[i] = (double)i / 16.0;
  Tensor grid = tile_grid({img, img}, 2);
  REQUIRE(grid.shape() == Shape{3, 2 + 4, 2 * 2 + 3 * 2});
  const std::size_t gh = 6, gw = 10;
  for (std::size_t ch = 0; ch < 3; ++ch) {
    CHECK(grid[(ch * gh + 2) * gw + 2] == img[ch * 4]);       // first copy
    CHECK(grid[(ch * gh + 2) * gw + 6] == img[ch * 4]);       // second copy
    CHECK(grid[(ch * gh + 2) * gw + 4] == 0.5);               // gap
  }
}

TEST_CASE("mixed shapes and empty input are rejected") {
  CHECK_THROWS_AS(tile_grid({}, 2), Error);
  CHECK_THROWS_AS(tile_grid({Tensor({2, 2}), Tensor({2, 3})}, 2), Error);
  CHECK_THROWS_AS(tile_grid({Tensor({2, 2, 2})}, 2), Error);  // 2 channels
  CHECK_THROWS_AS(tile_grid({Tensor({2, 2})}, 0), Error);
}

TEST_CASE("render_grid writes a png that decodes to the tiling") {
  std::vector<Tensor> images;
  for (int k = 0; k < 3; ++k)
    images.push_back(Tensor::full({4, 4}, (double)(50 * (k + 1)) / 255.0));
  fs::path p = fs::temp_directory_path() / "cmem_png_tests" / "grid.png";
  fs::create_directories(p.parent_path());
  render_grid(images, 3, p);
  Tensor back = read_png(p);
  Tensor expect = tile_grid(images, 3);
  REQUIRE(back.shape() == expect.shape());
  // All values sit on the 8-bit grid except the 0.5 separator, which
  // rounds to 128/255.
  for (std::size_t i = 0; i < back.numel(); ++i)
    CHECK(std::abs(back[i] - expect[i]) <= 0.5 / 255.0 + 1e-12);
}
