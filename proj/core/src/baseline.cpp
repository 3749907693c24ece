// cmem/baseline.cpp

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

#include "cmem/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "cmem/common.hpp"
#include "cmem/rng.hpp"
#include "cmem/weights_io.hpp"

namespace cmem {

namespace {
constexpr std::size_t kInferBatch = 256;
}  // namespace

DirectRegressor build_direct(std::size_t d_y, std::size_t channels,
                             std::uint64_t seed) {
  CMEM_CHECK(channels == 1 || channels == 3)
      << "unsupported geometry: " << channels << " channels (want 1 or 3)";
  CMEM_CHECK(d_y > 0) << "build_direct: modality width must be positive";
  DirectRegressor m;
  m.d_y = d_y;
  m.channels = channels;
  m.seed = seed;
  using L = LayerSpec;
  m.net = {L::Dense(d_y, 16 * 7 * 14), L::Relu(),
           L::Reshape({16, 7, 14}),    L::Upsample2x2(),
           L::Conv2d(8, 16, 3),        L::Relu(),
           L::Upsample2x2(),           L::Conv2d(8, 8, 3),
           L::Relu(),                  L::Conv2d(channels, 8, 3),
           L::Sigmoid()};
  Rng rng(derive_seed(seed, "direct_init"));
  m.params.add_stack("net", m.net, rng);
  return m;
}

std::vector<Scalar> train_direct(DirectRegressor& model, const Tensor& y_z,
                                 const Tensor& images, const FitConfig& cfg) {
  CMEM_CHECK(y_z.rank() == 2 && y_z.dim(1) == model.d_y)
      << "train_direct: embeddings " << y_z.shape_str() << " do not match [n, "
      << model.d_y << "]";
  const std::size_t n = y_z.dim(0);
  Shape want{n, model.channels, kImageHeight, kImageWidth};
  CMEM_CHECK(images.shape() == want)
      << "train_direct: images " << images.shape_str() << " do not match "
      << shape_to_string(want);
  CMEM_CHECK(n > 0) << "train_direct: empty pair list";
  CMEM_CHECK(cfg.batch > 0) << "train_direct: batch must be positive";
  const Scalar pixels =
      (Scalar)(model.channels * kImageHeight * kImageWidth);
  const std::size_t img_stride = (std::size_t)pixels;

  AdamState adam(cfg.adam);
  std::vector<Scalar> history;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), (std::size_t)0);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng shuffle_rng(
        derive_seed(cfg.seed, "direct_shuffle_" + std::to_string(epoch)));
    shuffle_rng.shuffle(order);

    Scalar total = 0.0;
    for (std::size_t lo = 0; lo < n; lo += cfg.batch) {
      const std::size_t hi = std::min(n, lo + cfg.batch);
      const std::size_t b = hi - lo;
      Tensor yb({b, model.d_y});
      Tensor xb({b, model.channels, kImageHeight, kImageWidth});
      for (std::size_t r = lo; r < hi; ++r) {
        const std::size_t i = order[r];
        std::copy(y_z.data() + i * model.d_y,
                  y_z.data() + (i + 1) * model.d_y,
                  yb.data() + (r - lo) * model.d_y);
        std::copy(images.data() + i * img_stride,
                  images.data() + (i + 1) * img_stride,
                  xb.data() + (r - lo) * img_stride);
      }
      Tape tape;
      auto vars = bind_params(tape, model.params, /*trainable=*/true);
      Var pred = run_stack(tape, model.net, "net", vars,
                           tape.leaf(std::move(yb)));
      Var loss = scale(bce(pred, tape.leaf(std::move(xb))), pixels);
      const Scalar value = tape.value(loss)[0];
      CMEM_CHECK(std::isfinite(value))
          << "train_direct: non-finite loss " << value << " at epoch "
          << epoch << ", batch " << lo / cfg.batch;
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
      *cfg.log << "direct epoch " << epoch + 1 << "/" << cfg.epochs
               << " loss " << mean << "\n";
  }
  return history;
}

Tensor predict_direct(const DirectRegressor& model, const Tensor& y_z) {
  const bool single = y_z.rank() == 1;
  Tensor batch = single ? y_z.reshaped({1, y_z.numel()}) : y_z;
  CMEM_CHECK(batch.rank() == 2 && batch.dim(1) == model.d_y)
      << "predict_direct: embeddings " << y_z.shape_str()
      << " do not match [n, " << model.d_y << "]";
  const std::size_t n = batch.dim(0);
  Tensor out({n, model.channels, kImageHeight, kImageWidth});
  const std::size_t stride = out.numel() / n;
  for (std::size_t lo = 0; lo < n; lo += kInferBatch) {
    const std::size_t hi = std::min(n, lo + kInferBatch);
    Tensor chunk({hi - lo, model.d_y},
                 std::vector<Scalar>(batch.data() + lo * model.d_y,
                                     batch.data() + hi * model.d_y));
    Tape tape;
    auto vars = bind_params(tape, model.params, /*trainable=*/false);
    Var y = run_stack(tape, model.net, "net", vars,
                      tape.leaf(std::move(chunk)));
    const Tensor& v = tape.value(y);
    std::copy(v.data(), v.data() + v.numel(), out.data() + lo * stride);
  }
  return single ? out.reshaped(model.image_shape()) : out;
}

void save_direct(const DirectRegressor& model,
                 const std::filesystem::path& stem) {
  save_params(stem.string() + ".cmem", model.params);
  nlohmann::json j;
  j["d_y"] = model.d_y;
  j["channels"] = model.channels;
  j["height"] = kImageHeight;
  j["width"] = kImageWidth;
  j["seed"] = model.seed;
  j["loss_history"] = model.loss_history;
  std::ofstream out(stem.string() + ".json");
  CMEM_CHECK(out.good()) << "cannot write " << stem.string() << ".json";
  out << j.dump(2) << "\n";
}

DirectRegressor load_direct(const std::filesystem::path& stem) {
  std::ifstream in(stem.string() + ".json");
  CMEM_CHECK(in.good()) << "direct baseline not found: " << stem.string()
                        << ".json";
  nlohmann::json j = nlohmann::json::parse(in);
  DirectRegressor m =
      build_direct(j.at("d_y"), j.at("channels"), j.at("seed"));
  m.loss_history = j.at("loss_history").get<std::vector<Scalar>>();
  load_params(stem.string() + ".cmem", m.params);
  return m;
}

}  // namespace cmem
