// cmem/baseline.hpp

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

#ifndef CMEM_BASELINE_HPP_
#define CMEM_BASELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "cmem/image_models.hpp"
#include "cmem/layers.hpp"
#include "cmem/tensor.hpp"

namespace cmem {

// Comparison method: regress pixels straight from the modality embedding,
// with no latent space in between. A small generator-style stack: dense
// projection to a 16 x 7 x 14 grid, two upsample+conv stages, sigmoid out.
struct DirectRegressor {
  std::size_t d_y = 26;
  std::size_t channels = 1;
  std::uint64_t seed = 0;
  Architecture net;
  ModelParams params;
  std::vector<Scalar> loss_history;

  Shape image_shape() const { return {channels, kImageHeight, kImageWidth}; }
};

DirectRegressor build_direct(std::size_t d_y, std::size_t channels,
                             std::uint64_t seed);

// Minimizes per-image reconstruction cross-entropy, same convention as
// train_image_model. Returns and appends per-epoch mean losses.
std::vector<Scalar> train_direct(DirectRegressor& model, const Tensor& y_z,
                                 const Tensor& images, const FitConfig& cfg);

// [d_y] -> [c, 28, 56], or [n, d_y] -> [n, c, 28, 56]; pixels in (0, 1).
Tensor predict_direct(const DirectRegressor& model, const Tensor& y_z);

void save_direct(const DirectRegressor& model,
                 const std::filesystem::path& stem);
DirectRegressor load_direct(const std::filesystem::path& stem);

}  // namespace cmem

#endif  // CMEM_BASELINE_HPP_
