// cmem/image_models.hpp

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

#ifndef CMEM_IMAGE_MODELS_HPP_
#define CMEM_IMAGE_MODELS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cmem/adam.hpp"
#include "cmem/layers.hpp"
#include "cmem/tensor.hpp"

namespace cmem {

inline constexpr std::size_t kImageHeight = 28;
inline constexpr std::size_t kImageWidth = 56;
inline constexpr std::size_t kEmbedDim = 100;

enum class ImageModelKind { kConvVae, kMlpVae, kConvAe, kMlpAe };

const char* image_model_kind_name(ImageModelKind k);  // "conv_vae", ...
ImageModelKind image_model_kind_from_name(const std::string& name);
bool is_vae(ImageModelKind k);

// Auto-encoder over [channels, 28, 56] images with a 100-dim embedding.
// VAE kinds split the encoder into a trunk plus mu / log-variance heads;
// plain kinds embed straight from the trunk.
struct ImageAutoencoder {
  ImageModelKind kind = ImageModelKind::kMlpVae;
  std::size_t channels = 1;  // 1 grayscale, 3 rgb
  std::uint64_t seed = 0;
  Architecture encoder;                 // trunk
  Architecture mu_head, log_var_head;   // VAE kinds only
  Architecture decoder;
  ModelParams params;
  std::vector<Scalar> loss_history;     // per-epoch mean training loss

  bool vae() const { return is_vae(kind); }
  Shape image_shape() const { return {channels, kImageHeight, kImageWidth}; }
  // Width of the first decoder dense layer; derived from shape algebra,
  // recorded in the sidecar.
  std::size_t decoder_dense_width() const;
};

ImageAutoencoder build_image_model(ImageModelKind kind, std::size_t channels,
                                   std::uint64_t seed);

struct FitConfig {
  std::size_t epochs = 5;
  std::size_t batch = 128;
  std::uint64_t seed = 0;  // epoch shuffles and reparameterization noise
  AdamConfig adam;
  std::ostream* log = nullptr;  // one line per epoch when set
};

// Minimizes per-image reconstruction cross-entropy (summed over pixels,
// averaged over the batch), plus the per-image KL term for VAE kinds.
// Returns and appends the per-epoch mean losses. Aborts on non-finite loss.
std::vector<Scalar> train_image_model(ImageAutoencoder& model,
                                      const Tensor& images,
                                      const FitConfig& cfg);

// [n, c, 28, 56] -> [n, 100], or a single [c, 28, 56] -> [100]. VAE kinds
// return the posterior mean, so encoding is deterministic.
Tensor encode(const ImageAutoencoder& model, const Tensor& images);

// [n, 100] -> [n, c, 28, 56], or [100] -> [c, 28, 56]; pixels in (0, 1).
Tensor decode(const ImageAutoencoder& model, const Tensor& embeddings);

// <stem>.cmem holds the parameters, <stem>.json the kind, geometry, seed
// and loss history.
void save_image_model(const ImageAutoencoder& model,
                      const std::filesystem::path& stem);
ImageAutoencoder load_image_model(const std::filesystem::path& stem);

}  // namespace cmem

#endif  // CMEM_IMAGE_MODELS_HPP_
