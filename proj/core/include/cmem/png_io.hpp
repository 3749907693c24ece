// cmem/png_io.hpp

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

#ifndef CMEM_PNG_IO_HPP_
#define CMEM_PNG_IO_HPP_

#include <filesystem>

#include "cmem/tensor.hpp"

namespace cmem {

// image is [h, w] grayscale or [3, h, w] RGB with values in [0, 1],
// written as 8-bit PNG (value v stored as round(v * 255)).
void write_png(const std::filesystem::path& path, const Tensor& image);

// Reads 8-bit grayscale or RGB (16-bit and palette inputs are normalized
// to 8-bit). Returns [h, w] or [3, h, w] in [0, 1].
Tensor read_png(const std::filesystem::path& path);

}  // namespace cmem

#endif  // CMEM_PNG_IO_HPP_
