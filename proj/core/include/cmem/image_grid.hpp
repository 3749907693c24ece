// cmem/image_grid.hpp

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

#ifndef CMEM_IMAGE_GRID_HPP_
#define CMEM_IMAGE_GRID_HPP_

#include <filesystem>
#include <vector>

#include "cmem/tensor.hpp"

namespace cmem {

inline constexpr std::size_t kGridSeparator = 2;  // pixels, also the border

// Tiles same-shaped images ([h, w] or [3, h, w]) row-major into one image
// with mid-gray separators and border. Unused trailing cells stay gray.
Tensor tile_grid(const std::vector<Tensor>& images, std::size_t cols);

// tile_grid + 8-bit PNG write.
void render_grid(const std::vector<Tensor>& images, std::size_t cols,
                 const std::filesystem::path& path);

}  // namespace cmem

#endif  // CMEM_IMAGE_GRID_HPP_
