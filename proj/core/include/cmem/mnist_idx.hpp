// cmem/mnist_idx.hpp

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

#ifndef CMEM_MNIST_IDX_HPP_
#define CMEM_MNIST_IDX_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "cmem/tensor.hpp"

namespace cmem {

// One grayscale digit exemplar; pixels [h, w] in [0, 1].
struct LabeledImage {
  Tensor pixels;
  int label = 0;
};

// IDX container magics, big-endian on disk.
inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

// Readers for the two IDX flavors. Pixel bytes are scaled by 1/255.
std::vector<Tensor> read_idx_images(const std::filesystem::path& path);
std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path);

// Joins the two files; counts must agree. Bad magic, truncation and count
// mismatch each raise a distinct error message.
std::vector<LabeledImage> load_mnist_idx(
    const std::filesystem::path& image_path,
    const std::filesystem::path& label_path);

// Writers, used for fixtures and round-trip tests.
void write_idx_images(const std::filesystem::path& path,
                      const std::vector<Tensor>& images);
void write_idx_labels(const std::filesystem::path& path,
                      const std::vector<std::uint8_t>& labels);

}  // namespace cmem

#endif  // CMEM_MNIST_IDX_HPP_
