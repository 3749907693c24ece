// cmem/mapping.cpp

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

#include "cmem/mapping.hpp"

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

constexpr Scalar kSigmaFloor = 1e-6;
constexpr std::size_t kInferBatch = 1024;

Tensor as_rows(const Tensor& t, std::size_t width, const char* what) {
  CMEM_CHECK((t.rank() == 1 && t.dim(0) == width) ||
             (t.rank() == 2 && t.dim(1) == width))
      << what << ": want [n, " << width << "] or [" << width << "], got "
      << t.shape_str();
  return t.rank() == 1 ? t.reshaped({1, width}) : t;
}

// No-grad forward of one stack over row batches.
Tensor run_plain(const ModelParams& params, const Architecture& arch,
                 const std::string& prefix, const Tensor& rows) {
  const std::size_t n = rows.dim(0);
  const std::size_t in = rows.dim(1);
  const std::size_t out = trace_shapes(arch, {1, in}).back()[1];
  Tensor result({n, out});
  for (std::size_t lo = 0; lo < n; lo += kInferBatch) {
    const std::size_t hi = std::min(n, lo + kInferBatch);
    Tensor chunk({hi - lo, in},
                 std::vector<Scalar>(rows.data() + lo * in,
                                     rows.data() + hi * in));
    Tape tape;
    auto vars = bind_params(tape, params, /*trainable=*/false);
    Var y = run_stack(tape, arch, prefix, vars, tape.leaf(std::move(chunk)));
    const Tensor& v = tape.value(y);
    std::copy(v.data(), v.data() + v.numel(), result.data() + lo * out);
  }
  return result;
}

Tensor shaped_like(Tensor rows, const Tensor& original) {
  return original.rank() == 1 ? rows.reshaped({rows.dim(1)}) : rows;
}

}  // namespace

const char* mapping_variant_name(MappingVariant v) {
  switch (v) {
    case MappingVariant::kNormalization: return "normalization";
    case MappingVariant::kTrainable: return "trainable";
  }
  CMEM_ERR << "unknown mapping variant";
  return "";  // unreachable
}

MappingVariant mapping_variant_from_name(const std::string& name) {
  if (name == "normalization") return MappingVariant::kNormalization;
  if (name == "trainable") return MappingVariant::kTrainable;
  CMEM_ERR << "unknown mapping variant \"" << name
           << "\" (want normalization or trainable)";
  return MappingVariant::kNormalization;  // unreachable
}

MappingModel build_mapping(MappingVariant variant, std::size_t d_y,
                           std::uint64_t seed) {
  CMEM_CHECK(d_y > 0) << "build_mapping: modality width must be positive";
  MappingModel m;
  m.variant = variant;
  m.d_y = d_y;
  m.seed = seed;
  using L = LayerSpec;
  m.fy = {L::Dense(d_y, 256), L::Relu(), L::Dense(256, kEmbedDim)};
  m.fyi = {L::Dense(kEmbedDim, 256), L::Relu(), L::Dense(256, d_y)};
  Rng rng(derive_seed(seed, "mapping_init"));
  m.params.add_stack("fy", m.fy, rng);
  m.params.add_stack("fyi", m.fyi, rng);
  if (variant == MappingVariant::kTrainable) {
    m.fx = {L::Dense(kEmbedDim, 256), L::Relu(), L::Dense(256, kEmbedDim)};
    m.fxi = {L::Dense(kEmbedDim, 256), L::Relu(), L::Dense(256, kEmbedDim)};
    m.params.add_stack("fx", m.fx, rng);
    m.params.add_stack("fxi", m.fxi, rng);
  }
  return m;
}

void fit_normalization(MappingModel& m, const Tensor& image_embeddings) {
  CMEM_CHECK(m.normalized())
      << "fit_normalization: model uses the trainable image side";
  Tensor rows = as_rows(image_embeddings, kEmbedDim, "fit_normalization");
  const std::size_t n = rows.dim(0);
  CMEM_CHECK(n >= 2) << "fit_normalization: need at least 2 embeddings, got "
                     << n;
  Tensor mu({kEmbedDim});
  Tensor sigma({kEmbedDim});
  for (std::size_t j = 0; j < kEmbedDim; ++j) {
    Scalar s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += rows[i * kEmbedDim + j];
    mu[j] = s / (Scalar)n;
    Scalar sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Scalar d = rows[i * kEmbedDim + j] - mu[j];
      sq += d * d;
    }
    sigma[j] = std::max(std::sqrt(sq / (Scalar)n), kSigmaFloor);
  }
  m.mu_x = std::move(mu);
  m.sigma_x = std::move(sigma);
}

Tensor map_image_to_latent(const MappingModel& m, const Tensor& x_z) {
  Tensor rows = as_rows(x_z, kEmbedDim, "map_image_to_latent");
  CMEM_CHECK(m.image_side_ready())
      << "map_image_to_latent: fit_normalization has not run";
  if (!m.normalized())
    return shaped_like(run_plain(m.params, m.fx, "fx", rows), x_z);
  Tensor out = rows;
  for (std::size_t i = 0; i < out.dim(0); ++i)
    for (std::size_t j = 0; j < kEmbedDim; ++j)
      out[i * kEmbedDim + j] =
          (out[i * kEmbedDim + j] - m.mu_x[j]) / m.sigma_x[j];
  return shaped_like(std::move(out), x_z);
}

Tensor map_latent_to_image(const MappingModel& m, const Tensor& l) {
  Tensor rows = as_rows(l, kEmbedDim, "map_latent_to_image");
  CMEM_CHECK(m.image_side_ready())
      << "map_latent_to_image: fit_normalization has not run";
  if (!m.normalized())
    return shaped_like(run_plain(m.params, m.fxi, "fxi", rows), l);
  Tensor out = rows;
  for (std::size_t i = 0; i < out.dim(0); ++i)
    for (std::size_t j = 0; j < kEmbedDim; ++j)
      out[i * kEmbedDim + j] =
          out[i * kEmbedDim + j] * m.sigma_x[j] + m.mu_x[j];
  return shaped_like(std::move(out), l);
}

Tensor map_modality_to_latent(const MappingModel& m, const Tensor& y_z) {
  Tensor rows = as_rows(y_z, m.d_y, "map_modality_to_latent");
  return shaped_like(run_plain(m.params, m.fy, "fy", rows), y_z);
}

Tensor map_latent_to_modality(const MappingModel& m, const Tensor& l) {
  Tensor rows = as_rows(l, kEmbedDim, "map_latent_to_modality");
  return shaped_like(run_plain(m.params, m.fyi, "fyi", rows), l);
}

MappingTraces train_mapping(MappingModel& m, const Tensor& x_z,
                            const Tensor& y_z,
                            const MappingTrainConfig& cfg) {
  Tensor xs = as_rows(x_z, kEmbedDim, "train_mapping image embeddings");
  Tensor ys = as_rows(y_z, m.d_y, "train_mapping modality embeddings");
  const std::size_t n = xs.dim(0);
  CMEM_CHECK(n == ys.dim(0))
      << "train_mapping: " << n << " image embeddings vs " << ys.dim(0)
      << " modality embeddings";
  CMEM_CHECK(n > 0) << "train_mapping: empty pair list";
  CMEM_CHECK(cfg.batch > 0) << "train_mapping: batch must be positive";
  CMEM_CHECK(m.image_side_ready())
      << "train_mapping: fit_normalization has not run";

  // Frozen image side: latent targets are constants of the data.
  Tensor lx_all = m.normalized() ? map_image_to_latent(m, xs) : Tensor();

  AdamState adam(cfg.adam);
  MappingTraces out;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), (std::size_t)0);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng shuffle_rng(
        derive_seed(cfg.seed, "map_shuffle_" + std::to_string(epoch)));
    shuffle_rng.shuffle(order);

    Scalar sum_l1 = 0.0, sum_l2 = 0.0, sum_l3 = 0.0, sum_total = 0.0;
    for (std::size_t lo = 0; lo < n; lo += cfg.batch) {
      const std::size_t hi = std::min(n, lo + cfg.batch);
      const std::size_t b = hi - lo;
      Tensor xb({b, kEmbedDim});
      Tensor yb({b, m.d_y});
      Tensor lxb = m.normalized() ? Tensor({b, kEmbedDim}) : Tensor();
      for (std::size_t r = lo; r < hi; ++r) {
        const std::size_t i = order[r];
        std::copy(xs.data() + i * kEmbedDim, xs.data() + (i + 1) * kEmbedDim,
                  xb.data() + (r - lo) * kEmbedDim);
        std::copy(ys.data() + i * m.d_y, ys.data() + (i + 1) * m.d_y,
                  yb.data() + (r - lo) * m.d_y);
        if (m.normalized())
          std::copy(lx_all.data() + i * kEmbedDim,
                    lx_all.data() + (i + 1) * kEmbedDim,
                    lxb.data() + (r - lo) * kEmbedDim);
      }

      Tape tape;
      auto vars = bind_params(tape, m.params, /*trainable=*/true);
      Var yv = tape.leaf(std::move(yb));
      Var ly = run_stack(tape, m.fy, "fy", vars, yv);
      Var l1{}, l2{};
      if (m.normalized()) {
        l1 = mse(ly, tape.leaf(std::move(lxb)));
      } else {
        Var xv = tape.leaf(std::move(xb));
        Var lx = run_stack(tape, m.fx, "fx", vars, xv);
        l1 = mse(ly, lx);
        l2 = mse(run_stack(tape, m.fxi, "fxi", vars, lx), xv);
      }
      Var l3 = mse(run_stack(tape, m.fyi, "fyi", vars, ly), yv);
      Var total = add(scale(l1, cfg.w1), scale(l3, cfg.w3));
      if (!m.normalized()) total = add(total, scale(l2, cfg.w2));

      const Scalar v1 = tape.value(l1)[0];
      const Scalar v2 = m.normalized() ? 0.0 : tape.value(l2)[0];
      const Scalar v3 = tape.value(l3)[0];
      const Scalar vt = tape.value(total)[0];
      CMEM_CHECK(std::isfinite(vt))
          << "train_mapping: non-finite loss " << vt << " at epoch " << epoch
          << ", batch " << lo / cfg.batch;
      tape.backward(total);
      std::map<std::string, Tensor> grads;
      for (const std::string& name : m.params.names())
        grads.emplace(name, tape.grad(vars.at(name)));
      adam.step(m.params, grads);

      sum_l1 += v1 * (Scalar)b;
      sum_l2 += v2 * (Scalar)b;
      sum_l3 += v3 * (Scalar)b;
      sum_total += vt * (Scalar)b;
    }
    out.latent.push_back(sum_l1 / (Scalar)n);
    out.image_recon.push_back(sum_l2 / (Scalar)n);
    out.modality_recon.push_back(sum_l3 / (Scalar)n);
    out.total.push_back(sum_total / (Scalar)n);
    if (cfg.log)
      *cfg.log << "mapping epoch " << epoch + 1 << "/" << cfg.epochs
               << " latent " << out.latent.back() << " total "
               << out.total.back() << "\n";
  }

  m.traces.latent.insert(m.traces.latent.end(), out.latent.begin(),
                         out.latent.end());
  m.traces.image_recon.insert(m.traces.image_recon.end(),
                              out.image_recon.begin(), out.image_recon.end());
  m.traces.modality_recon.insert(m.traces.modality_recon.end(),
                                 out.modality_recon.begin(),
                                 out.modality_recon.end());
  m.traces.total.insert(m.traces.total.end(), out.total.begin(),
                        out.total.end());
  return out;
}

Tensor translate_to_image(const Tensor& y_z, const MappingModel& m,
                          const ImageAutoencoder& image_model) {
  Tensor latent = map_modality_to_latent(m, y_z);
  return decode(image_model, map_latent_to_image(m, latent));
}

std::vector<RankedClass> translate_to_modality(
    const Tensor& image, const MappingModel& m,
    const ImageAutoencoder& image_model,
    const std::vector<std::pair<std::string, Tensor>>& class_index) {
  CMEM_CHECK(!class_index.empty()) << "translate_to_modality: empty index";
  Tensor predicted =
      map_latent_to_modality(m, map_image_to_latent(m, encode(image_model, image)));
  Tensor rows = as_rows(predicted, m.d_y, "translate_to_modality");

  std::vector<RankedClass> ranked;
  for (const auto& [label, y] : class_index) {
    CMEM_CHECK(y.numel() == m.d_y)
        << "translate_to_modality: class \"" << label << "\" embedding has "
        << y.numel() << " dims, want " << m.d_y;
    Scalar sq = 0.0;
    for (std::size_t j = 0; j < m.d_y; ++j) {
      const Scalar d = rows[j] - y[j];
      sq += d * d;
    }
    ranked.push_back({label, std::sqrt(sq)});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedClass& a, const RankedClass& b) {
                     return a.distance < b.distance;
                   });
  return ranked;
}

void save_mapping(const MappingModel& m, const std::filesystem::path& stem) {
  std::vector<TensorEntry> entries;
  for (const std::string& name : m.params.names())
    entries.push_back(TensorEntry::from_tensor(name, m.params.tensor(name)));
  if (m.normalized() && m.image_side_ready()) {
    entries.push_back(TensorEntry::from_tensor("norm.mu", m.mu_x));
    entries.push_back(TensorEntry::from_tensor("norm.sigma", m.sigma_x));
  }
  write_cmem_file(stem.string() + ".cmem", entries);

  nlohmann::json j;
  j["variant"] = mapping_variant_name(m.variant);
  j["d_y"] = m.d_y;
  j["latent_dim"] = kEmbedDim;
  j["seed"] = m.seed;
  j["traces"] = {{"latent", m.traces.latent},
                 {"image_recon", m.traces.image_recon},
                 {"modality_recon", m.traces.modality_recon},
                 {"total", m.traces.total}};
  std::ofstream out(stem.string() + ".json");
  CMEM_CHECK(out.good()) << "cannot write " << stem.string() << ".json";
  out << j.dump(2) << "\n";
}

MappingModel load_mapping(const std::filesystem::path& stem) {
  std::ifstream in(stem.string() + ".json");
  CMEM_CHECK(in.good()) << "mapping not found: " << stem.string() << ".json";
  nlohmann::json j = nlohmann::json::parse(in);
  MappingModel m = build_mapping(mapping_variant_from_name(j.at("variant")),
                                 j.at("d_y"), j.at("seed"));
  m.traces.latent = j.at("traces").at("latent").get<std::vector<Scalar>>();
  m.traces.image_recon =
      j.at("traces").at("image_recon").get<std::vector<Scalar>>();
  m.traces.modality_recon =
      j.at("traces").at("modality_recon").get<std::vector<Scalar>>();
  m.traces.total = j.at("traces").at("total").get<std::vector<Scalar>>();

  for (TensorEntry& e : read_cmem_file(stem.string() + ".cmem")) {
    if (e.name == "norm.mu") {
      m.mu_x = e.to_tensor();
    } else if (e.name == "norm.sigma") {
      m.sigma_x = e.to_tensor();
    } else {
      CMEM_CHECK(m.params.has(e.name))
          << "load_mapping: unexpected tensor \"" << e.name << "\"";
      Tensor t = e.to_tensor();
      CMEM_CHECK(t.same_shape(m.params.tensor(e.name)))
          << "load_mapping: shape mismatch for \"" << e.name << "\"";
      m.params.tensor(e.name) = std::move(t);
    }
  }
  return m;
}

}  // namespace cmem
