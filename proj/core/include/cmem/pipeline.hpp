// cmem/pipeline.hpp

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

#ifndef CMEM_PIPELINE_HPP_
#define CMEM_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmem/dataset.hpp"
#include "cmem/tensor.hpp"

namespace cmem {

// Everything one end-to-end run depends on. Every field has a default, so
// an empty config file reproduces the reference protocol; outputs are a
// pure function of this struct plus the dataset exemplar source.
struct RunConfig {
  std::uint64_t seed = 1;
  double scale = 1.0;  // shrinks per-class sample counts, nothing else
  bool colored = false;
  std::vector<std::string> modalities = {"text"};  // "text" and/or "speech"

  std::size_t per_class_count = 0;  // 0 = dataset default (1000 / 4000)
  std::size_t held_out = 16;
  std::size_t synth_pool_per_digit = 200;  // stand-in exemplars per digit
  std::string mnist_dir;  // holds the IDX files when set; synthetic otherwise

  std::string model_kind = "mlp_vae";
  std::string mapping_variant = "normalization";
  std::size_t ae_epochs = 8;
  std::size_t map_epochs = 20;
  std::size_t baseline_epochs = 5;
  std::size_t batch = 128;
  double lr = 1e-3;
  double w1 = 1.0, w2 = 1.0, w3 = 1.0;

  std::size_t token_dim = 13;
  std::uint64_t token_seed = 77;  // fixed word vectors, shared across runs
  std::string token_table_file;   // overrides the synthetic table
  std::string speech_dir;         // <token>.wav clips; synthetic otherwise

  std::filesystem::path data_dir;  // "" = $CMEM_DATA_DIR, else "data"
  std::filesystem::path out_dir = "runs/out";
};

// Scaled sample count per digit pair; at least 1, and at least 9 for
// colored datasets so every color pair can appear.
std::size_t effective_per_class(const RunConfig& cfg);

// Result-affecting fields only (paths excluded), sorted keys.
nlohmann::json run_config_to_json(const RunConfig& cfg);
// Missing keys keep their defaults; unknown keys are an error.
RunConfig run_config_from_json(const nlohmann::json& j);
std::string config_hash(const RunConfig& cfg);  // 16 hex chars

std::filesystem::path resolved_data_dir(const RunConfig& cfg);
std::filesystem::path dataset_dir(const RunConfig& cfg);

// Fixed per-token vectors for one modality; class embeddings are the
// concatenation over the class's word sequence.
class EmbeddingProvider {
 public:
  EmbeddingProvider(const RunConfig& cfg, const std::string& modality);

  Tensor embed(const ComboClass& cls) const;  // [tokens * dim_per_token]
  std::size_t dim_per_token() const { return dim_; }
  std::size_t class_dim(bool colored) const {
    return (colored ? 4 : 2) * dim_;
  }

 private:
  std::size_t dim_ = 0;
  std::map<std::string, std::vector<Scalar>> token_vecs_;
};

// Pipeline stages. Each reads its prerequisites from disk and names the
// missing one if a stage was skipped.
void cmd_synth_data(const RunConfig& cfg);
void cmd_train_ae(const RunConfig& cfg);
void cmd_train_map(const RunConfig& cfg);
void cmd_train_baseline(const RunConfig& cfg);

// Generates one image for a space-separated class ("seven five", or
// "red five blue one" for colored runs) and writes it as a PNG.
Tensor cmd_generate(const RunConfig& cfg, const std::string& class_words,
                    const std::string& modality,
                    const std::filesystem::path& out_png);

// Scores proposed vs direct on the held-out classes for every configured
// modality; writes eval/report.json, eval/table.txt and the image grids.
nlohmann::json cmd_evaluate(const RunConfig& cfg);

// All stages in order; returns the evaluation report.
nlohmann::json run_pipeline(const RunConfig& cfg);

// Independent runs at seed, seed+1, ...; writes a combined report with
// per-seed rows and cross-seed means under cfg.out_dir.
nlohmann::json run_pipeline_seeds(const RunConfig& cfg, std::size_t seeds);

}  // namespace cmem

#endif  // CMEM_PIPELINE_HPP_
