// cmem/mapping.hpp

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

#ifndef CMEM_MAPPING_HPP_
#define CMEM_MAPPING_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cmem/adam.hpp"
#include "cmem/image_models.hpp"
#include "cmem/layers.hpp"
#include "cmem/tensor.hpp"

namespace cmem {

// How the image side maps between embedding space and the shared latent
// space. kNormalization freezes it to z-scoring by training-set statistics,
// so only the modality side trains and the image-side reconstruction loss
// vanishes identically. kTrainable gives both sides dense nets.
enum class MappingVariant { kNormalization, kTrainable };

const char* mapping_variant_name(MappingVariant v);
MappingVariant mapping_variant_from_name(const std::string& name);

// Loss traces, one entry per epoch: latent = distance between the two
// latent codes, image_recon / modality_recon = embedding auto-encoding
// errors, total = the weighted sum actually optimized.
struct MappingTraces {
  std::vector<Scalar> latent, image_recon, modality_recon, total;
};

// Pair of embedding auto-encoders whose 100-dim latent codes are pulled
// together during training, so a modality embedding can stand in for an
// image embedding at inference time.
struct MappingModel {
  MappingVariant variant = MappingVariant::kNormalization;
  std::size_t d_y = 26;  // modality embedding width
  std::uint64_t seed = 0;
  Tensor mu_x, sigma_x;  // [100] z-score stats; normalization variant only
  Architecture fx, fxi;  // image side encode / decode; trainable variant
  Architecture fy, fyi;  // modality side encode / decode
  ModelParams params;
  MappingTraces traces;

  bool normalized() const { return variant == MappingVariant::kNormalization; }
  bool image_side_ready() const {
    return !normalized() || sigma_x.numel() == kEmbedDim;
  }
};

MappingModel build_mapping(MappingVariant variant, std::size_t d_y,
                           std::uint64_t seed);

// Per-dimension mean and standard deviation over >= 2 training image
// embeddings [n, 100]; standard deviations floored at 1e-6.
void fit_normalization(MappingModel& m, const Tensor& image_embeddings);

// Forward maps; rows [n, d] or a single [d]. Pure over a frozen model.
Tensor map_image_to_latent(const MappingModel& m, const Tensor& x_z);
Tensor map_latent_to_image(const MappingModel& m, const Tensor& l);
Tensor map_modality_to_latent(const MappingModel& m, const Tensor& y_z);
Tensor map_latent_to_modality(const MappingModel& m, const Tensor& l);

struct MappingTrainConfig {
  std::size_t epochs = 20;
  std::size_t batch = 128;
  std::uint64_t seed = 0;
  AdamConfig adam;
  Scalar w1 = 1.0;  // latent agreement
  Scalar w2 = 1.0;  // image embedding reconstruction
  Scalar w3 = 1.0;  // modality embedding reconstruction
  std::ostream* log = nullptr;
};

// Minimizes w1*latent + w2*image_recon + w3*modality_recon over aligned
// rows of image and modality embeddings (squared-error distances). In the
// normalization variant the image side is frozen and image_recon is zero
// by construction. Returns and appends per-epoch traces.
MappingTraces train_mapping(MappingModel& m, const Tensor& x_z,
                            const Tensor& y_z,
                            const MappingTrainConfig& cfg);

// Conditional generation: decode the image that the modality embedding's
// latent code stands for. Reads no image input by design.
Tensor translate_to_image(const Tensor& y_z, const MappingModel& m,
                          const ImageAutoencoder& image_model);

struct RankedClass {
  std::string label;
  Scalar distance = 0.0;
};

// Inverse direction: embed the image, cross over to the modality side and
// rank the known classes by distance to the predicted modality embedding.
std::vector<RankedClass> translate_to_modality(
    const Tensor& image, const MappingModel& m,
    const ImageAutoencoder& image_model,
    const std::vector<std::pair<std::string, Tensor>>& class_index);

// <stem>.cmem holds the weights (plus the z-score stats as named tensors),
// <stem>.json the variant, widths, seed and loss traces.
void save_mapping(const MappingModel& m, const std::filesystem::path& stem);
MappingModel load_mapping(const std::filesystem::path& stem);

}  // namespace cmem

#endif  // CMEM_MAPPING_HPP_
