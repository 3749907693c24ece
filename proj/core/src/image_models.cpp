// cmem/image_models.cpp

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

#include "cmem/image_models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "cmem/common.hpp"
#include "cmem/rng.hpp"
#include "cmem/weights_io.hpp"

namespace cmem {

namespace {

// Inference batch size; bounds tape memory when encoding whole datasets.
constexpr std::size_t kInferBatch = 256;

Shape with_batch(std::size_t n, const Shape& per_sample) {
  Shape s{n};
  s.insert(s.end(), per_sample.begin(), per_sample.end());
  return s;
}

Tensor rows_of(const Tensor& stack, const std::vector<std::size_t>& idx,
               std::size_t lo, std::size_t hi) {
  const std::size_t stride = stack.numel() / stack.dim(0);
  Shape s = stack.shape();
  s[0] = hi - lo;
  Tensor out(s);
  for (std::size_t r = lo; r < hi; ++r)
    std::copy(stack.data() + idx[r] * stride,
              stack.data() + (idx[r] + 1) * stride,
              out.data() + (r - lo) * stride);
  return out;
}

}  // namespace

const char* image_model_kind_name(ImageModelKind k) {
  switch (k) {
    case ImageModelKind::kConvVae: return "conv_vae";
    case ImageModelKind::kMlpVae: return "mlp_vae";
    case ImageModelKind::kConvAe: return "conv_ae";
    case ImageModelKind::kMlpAe: return "mlp_ae";
  }
  CMEM_ERR << "unknown image model kind";
  return "";  // unreachable
}

ImageModelKind image_model_kind_from_name(const std::string& name) {
  if (name == "conv_vae") return ImageModelKind::kConvVae;
  if (name == "mlp_vae") return ImageModelKind::kMlpVae;
  if (name == "conv_ae") return ImageModelKind::kConvAe;
  if (name == "mlp_ae") return ImageModelKind::kMlpAe;
  CMEM_ERR << "unknown image model kind \"" << name
           << "\" (want conv_vae, mlp_vae, conv_ae or mlp_ae)";
  return ImageModelKind::kMlpVae;  // unreachable
}

bool is_vae(ImageModelKind k) {
  return k == ImageModelKind::kConvVae || k == ImageModelKind::kMlpVae;
}

std::size_t ImageAutoencoder::decoder_dense_width() const {
  for (const LayerSpec& l : decoder)
    if (l.kind == LayerKind::kDense) return l.out;
  CMEM_ERR << "decoder has no dense layer";
  return 0;  // unreachable
}

ImageAutoencoder build_image_model(ImageModelKind kind, std::size_t channels,
                                   std::uint64_t seed) {
  CMEM_CHECK(channels == 1 || channels == 3)
      << "unsupported geometry: " << channels << " channels (want 1 or 3)";
  ImageAutoencoder m;
  m.kind = kind;
  m.channels = channels;
  m.seed = seed;

  const std::size_t c = channels;
  const std::size_t flat = c * kImageHeight * kImageWidth;  // 1568 * c
  using L = LayerSpec;
  switch (kind) {
    case ImageModelKind::kConvVae:
      // 28x56 -> conv(8, 5x5) -> pool -> 8x14x28 = 3136 -> 256 -> 100.
      m.encoder = {L::Conv2d(8, c, 5), L::Relu(),        L::MaxPool2x2(),
                   L::Flatten(),       L::Dense(3136, 256), L::Relu()};
      m.mu_head = {L::Dense(256, kEmbedDim)};
      m.log_var_head = {L::Dense(256, kEmbedDim)};
      m.decoder = {L::Dense(kEmbedDim, 3136), L::Relu(),
                   L::Reshape({8, 14, 28}),   L::Conv2d(8, 8, 5),
                   L::Relu(),                 L::Upsample2x2(),
                   L::Conv2d(c, 8, 5),        L::Sigmoid()};
      break;
    case ImageModelKind::kMlpVae:
      m.encoder = {L::Flatten(), L::Dense(flat, 256), L::Relu()};
      m.mu_head = {L::Dense(256, kEmbedDim)};
      m.log_var_head = {L::Dense(256, kEmbedDim)};
      m.decoder = {L::Dense(kEmbedDim, 256), L::Relu(), L::Dense(256, flat),
                   L::Sigmoid(), L::Reshape({c, kImageHeight, kImageWidth})};
      break;
    case ImageModelKind::kConvAe:
      // Pooled twice: 8 x 7 x 14 = 784 on each side of the embedding.
      m.encoder = {L::Conv2d(16, c, 3), L::Relu(), L::MaxPool2x2(),
                   L::Conv2d(8, 16, 3), L::Relu(), L::MaxPool2x2(),
                   L::Flatten(),        L::Dense(784, kEmbedDim)};
      m.decoder = {L::Dense(kEmbedDim, 784), L::Relu(),
                   L::Reshape({8, 7, 14}),   L::Conv2d(8, 8, 3),
                   L::Relu(),                L::Upsample2x2(),
                   L::Conv2d(16, 8, 3),      L::Relu(),
                   L::Upsample2x2(),         L::Conv2d(c, 16, 5),
                   L::Sigmoid()};
      break;
    case ImageModelKind::kMlpAe:
      m.encoder = {L::Flatten(), L::Dense(flat, 256), L::Relu(),
                   L::Dense(256, kEmbedDim)};
      m.decoder = {L::Dense(kEmbedDim, 256), L::Relu(), L::Dense(256, flat),
                   L::Sigmoid(), L::Reshape({c, kImageHeight, kImageWidth})};
      break;
  }

  Rng rng(derive_seed(seed, "image_model_init"));
  m.params.add_stack("enc", m.encoder, rng);
  if (m.vae()) {
    m.params.add_stack("mu", m.mu_head, rng);
    m.params.add_stack("logvar", m.log_var_head, rng);
  }
  m.params.add_stack("dec", m.decoder, rng);
  return m;
}

std::vector<Scalar> train_image_model(ImageAutoencoder& model,
                                      const Tensor& images,
                                      const FitConfig& cfg) {
  CMEM_CHECK(images.rank() == 4 && images.shape() ==
             with_batch(images.dim(0), model.image_shape()))
      << "train_image_model: images " << images.shape_str()
      << " do not match geometry [n, " << model.channels << ", "
      << kImageHeight << ", " << kImageWidth << "]";
  const std::size_t n = images.dim(0);
  CMEM_CHECK(n > 0) << "train_image_model: empty image set";
  CMEM_CHECK(cfg.batch > 0) << "train_image_model: batch must be positive";
  const Scalar pixels = (Scalar)(model.channels * kImageHeight * kImageWidth);

  AdamState adam(cfg.adam);
  std::vector<Scalar> history;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), (std::size_t)0);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const std::string tag = std::to_string(epoch);
    Rng shuffle_rng(derive_seed(cfg.seed, "ae_shuffle_" + tag));
    Rng eps_rng(derive_seed(cfg.seed, "ae_eps_" + tag));
    shuffle_rng.shuffle(order);

    Scalar total = 0.0;
    for (std::size_t lo = 0; lo < n; lo += cfg.batch) {
      const std::size_t hi = std::min(n, lo + cfg.batch);
      const std::size_t b = hi - lo;
      Tape tape;
      auto vars = bind_params(tape, model.params, /*trainable=*/true);
      Var x = tape.leaf(rows_of(images, order, lo, hi));
      Var h = run_stack(tape, model.encoder, "enc", vars, x);
      Var loss{};
      if (model.vae()) {
        Var mu = run_stack(tape, model.mu_head, "mu", vars, h);
        Var lv = run_stack(tape, model.log_var_head, "logvar", vars, h);
        Tensor eps({b, kEmbedDim});
        for (std::size_t i = 0; i < eps.numel(); ++i)
          eps[i] = eps_rng.normal();
        Var z = reparameterize(mu, lv, eps);
        Var recon = run_stack(tape, model.decoder, "dec", vars, z);
        loss = add(scale(bce(recon, x), pixels),
                   scale(kl_diag_gaussian(mu, lv), 1.0 / (Scalar)b));
      } else {
        Var recon = run_stack(tape, model.decoder, "dec", vars, h);
        loss = scale(bce(recon, x), pixels);
      }
      const Scalar value = tape.value(loss)[0];
      CMEM_CHECK(std::isfinite(value))
          << "train_image_model: non-finite loss " << value << " at epoch "
          << epoch << ", batch " << lo / cfg.batch << " ("
          << image_model_kind_name(model.kind) << ", seed " << cfg.seed << ")";
      tape.backward(loss);
      std::map<std::string, Tensor> grads;
      for (const std::string& name : model.params.names())
        grads.emplace(name, tape.grad(vars.at(name)));
      adam.step(model.params, grads);
      total += value * (Scalar)b;
    }
    const Scalar mean = total / (Scalar)n;
    history.push_back(mean);
    model.loss_history.push_back(mean);
    if (cfg.log)
      *cfg.log << image_model_kind_name(model.kind) << " epoch " << epoch + 1
               << "/" << cfg.epochs << " loss " << mean << "\n";
  }
  return history;
}

namespace {

// Shared batched no-grad forward over a stack list.
Tensor run_batched(const ImageAutoencoder& model, const Tensor& input,
                   const Shape& per_sample_out,
                   const std::function<Var(Tape&, const std::map<std::string, Var>&, Var)>& fwd) {
  const std::size_t n = input.dim(0);
  Tensor out(with_batch(n, per_sample_out));
  const std::size_t in_stride = input.numel() / n;
  const std::size_t out_stride = out.numel() / n;
  for (std::size_t lo = 0; lo < n; lo += kInferBatch) {
    const std::size_t hi = std::min(n, lo + kInferBatch);
    Shape s = input.shape();
    s[0] = hi - lo;
    Tensor chunk(s, std::vector<Scalar>(input.data() + lo * in_stride,
                                        input.data() + hi * in_stride));
    Tape tape;
    auto vars = bind_params(tape, model.params, /*trainable=*/false);
    Var y = fwd(tape, vars, tape.leaf(std::move(chunk)));
    const Tensor& v = tape.value(y);
    std::copy(v.data(), v.data() + v.numel(), out.data() + lo * out_stride);
  }
  return out;
}

}  // namespace

Tensor encode(const ImageAutoencoder& model, const Tensor& images) {
  const bool single = images.rank() == 3;
  Tensor batch = single ? images.reshaped(with_batch(1, images.shape()))
                        : images;
  CMEM_CHECK(batch.rank() == 4 &&
             batch.shape() == with_batch(batch.dim(0), model.image_shape()))
      << "encode: images " << images.shape_str() << " do not match geometry ["
      << model.channels << ", " << kImageHeight << ", " << kImageWidth << "]";
  Tensor z = run_batched(
      model, batch, {kEmbedDim},
      [&model](Tape& tape, const std::map<std::string, Var>& vars, Var x) {
        Var h = run_stack(tape, model.encoder, "enc", vars, x);
        return model.vae() ? run_stack(tape, model.mu_head, "mu", vars, h) : h;
      });
  return single ? z.reshaped({kEmbedDim}) : z;
}

Tensor decode(const ImageAutoencoder& model, const Tensor& embeddings) {
  const bool single = embeddings.rank() == 1;
  Tensor batch = single ? embeddings.reshaped({1, embeddings.numel()})
                        : embeddings;
  CMEM_CHECK(batch.rank() == 2 && batch.dim(1) == kEmbedDim)
      << "decode: embeddings " << embeddings.shape_str()
      << " do not match [n, " << kEmbedDim << "]";
  Tensor img = run_batched(
      model, batch, model.image_shape(),
      [&model](Tape& tape, const std::map<std::string, Var>& vars, Var z) {
        return run_stack(tape, model.decoder, "dec", vars, z);
      });
  return single ? img.reshaped(model.image_shape()) : img;
}

void save_image_model(const ImageAutoencoder& model,
                      const std::filesystem::path& stem) {
  save_params(stem.string() + ".cmem", model.params);
  nlohmann::json j;
  j["kind"] = image_model_kind_name(model.kind);
  j["channels"] = model.channels;
  j["height"] = kImageHeight;
  j["width"] = kImageWidth;
  j["embed_dim"] = kEmbedDim;
  j["seed"] = model.seed;
  j["decoder_dense_width"] = model.decoder_dense_width();
  j["loss_history"] = model.loss_history;
  std::ofstream out(stem.string() + ".json");
  CMEM_CHECK(out.good()) << "cannot write " << stem.string() << ".json";
  out << j.dump(2) << "\n";
}

ImageAutoencoder load_image_model(const std::filesystem::path& stem) {
  std::ifstream in(stem.string() + ".json");
  CMEM_CHECK(in.good()) << "image model not found: " << stem.string()
                        << ".json";
  nlohmann::json j = nlohmann::json::parse(in);
  ImageAutoencoder m =
      build_image_model(image_model_kind_from_name(j.at("kind")),
                        j.at("channels"), j.at("seed"));
  m.loss_history = j.at("loss_history").get<std::vector<Scalar>>();
  load_params(stem.string() + ".cmem", m.params);
  return m;
}

}  // namespace cmem
