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

#include "cmem/pipeline.hpp"

#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>

#include "cmem/common.hpp"
#include "cmem/image_models.hpp"

using namespace cmem;
namespace fs = std::filesystem;

namespace {

const fs::path kBase = fs::temp_directory_path() / "cmem_test_pipeline";

// Small enough to train in seconds, large enough to exercise every stage.
RunConfig tiny_config(const fs::path& base) {
  RunConfig cfg;
  cfg.seed = 7;
  cfg.per_class_count = 3;
  cfg.held_out = 2;
  cfg.synth_pool_per_digit = 12;
  cfg.ae_epochs = 1;
  cfg.map_epochs = 2;
  cfg.baseline_epochs = 1;
  cfg.batch = 64;
  cfg.data_dir = base / "data";
  cfg.out_dir = base / "run1";
  return cfg;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("config json round trips through parse and emit") {
  RunConfig cfg;
  cfg.seed = 42;
  cfg.scale = 0.25;
  cfg.colored = true;
  cfg.modalities = {"text", "speech"};
  cfg.model_kind = "conv_ae";
  cfg.mapping_variant = "trainable";
  cfg.w2 = 0.5;
  cfg.token_seed = 123;
  const nlohmann::json j1 = run_config_to_json(cfg);
  const nlohmann::json j2 = run_config_to_json(run_config_from_json(j1));
  CHECK(j1 == j2);
  CHECK(j1["colored"] == true);
  CHECK(j1["modalities"] == nlohmann::json({"text", "speech"}));
  // Output locations never reach the emitted config.
  CHECK(!j1.contains("out_dir"));
  CHECK(!j1.contains("data_dir"));
}

TEST_CASE("partial configs keep defaults, unknown keys are rejected") {
  RunConfig cfg = run_config_from_json({{"seed", 9}});
  CHECK(cfg.seed == 9);
  CHECK(cfg.scale == 1.0);
  CHECK(cfg.model_kind == "mlp_vae");
  CHECK(cfg.modalities == std::vector<std::string>{"text"});

  CHECK_THROWS_WITH_AS(run_config_from_json({{"sede", 9}}),
                       doctest::Contains("sede"), Error);
  CHECK_THROWS_WITH_AS(
      run_config_from_json({{"modalities", {"smoke"}}}),
      doctest::Contains("smoke"), Error);
}

TEST_CASE("config hash is 16 hex chars, path-blind and key-sensitive") {
  RunConfig a, b;
  const std::string ha = config_hash(a);
  CHECK(ha.size() == 16);
  CHECK(std::all_of(ha.begin(), ha.end(), [](char c) {
    return std::isxdigit((unsigned char)c);
  }));
  b.out_dir = "somewhere/else";
  CHECK(config_hash(b) == ha);
  b.seed = 2;
  CHECK(config_hash(b) != ha);
}

TEST_CASE("per-class counts scale with floors for both dataset flavors") {
  RunConfig cfg;
  CHECK(effective_per_class(cfg) == 1000);
  cfg.scale = 0.1;
  CHECK(effective_per_class(cfg) == 100);
  cfg.colored = true;
  CHECK(effective_per_class(cfg) == 400);
  cfg.scale = 1e-9;
  CHECK(effective_per_class(cfg) == 9);  // one sample per color pair
  cfg.colored = false;
  CHECK(effective_per_class(cfg) == 1);
  cfg.scale = 0.5;
  cfg.per_class_count = 50;
  CHECK(effective_per_class(cfg) == 25);
}

TEST_CASE("dataset directory name keys the generation protocol") {
  RunConfig cfg;
  cfg.data_dir = "d";
  CHECK(dataset_dir(cfg) == fs::path("d") / "plain_s1_n1000_h16_p200");
  cfg.colored = true;
  cfg.seed = 3;
  cfg.scale = 0.01;
  CHECK(dataset_dir(cfg) == fs::path("d") / "colored_s3_n40_h16_p200");
  // A real exemplar corpus replaces the synthetic pool in the key.
  cfg.mnist_dir = "mnist";
  CHECK(dataset_dir(cfg) == fs::path("d") / "colored_s3_n40_h16");
}

TEST_CASE("text embeddings concatenate fixed per-word vectors") {
  RunConfig cfg;
  EmbeddingProvider p(cfg, "text");
  CHECK(p.dim_per_token() == 13);
  CHECK(p.class_dim(false) == 26);
  CHECK(p.class_dim(true) == 52);

  const Tensor two_five = p.embed({2, 5, -1, -1});
  REQUIRE(two_five.shape() == Shape{26});
  const Tensor two_two = p.embed({2, 2, -1, -1});
  // Shared first word, so the first halves agree; second halves differ.
  for (std::size_t i = 0; i < 13; ++i)
    CHECK(two_five.data()[i] == two_two.data()[i]);
  CHECK(two_five.data()[13] != two_two.data()[13]);

  // Same word table regardless of run seed.
  RunConfig other = cfg;
  other.seed = 99;
  const Tensor again = EmbeddingProvider(other, "text").embed({2, 5, -1, -1});
  for (std::size_t i = 0; i < 26; ++i)
    CHECK(again.data()[i] == two_five.data()[i]);

  const Tensor colored = p.embed({2, 5, 0, 2});
  REQUIRE(colored.shape() == Shape{52});
  // Colored order is color, digit, color, digit.
  for (std::size_t i = 0; i < 13; ++i)
    CHECK(colored.data()[13 + i] == two_five.data()[i]);
}

TEST_CASE("speech embeddings average mfcc frames per word") {
  RunConfig cfg;
  EmbeddingProvider p(cfg, "speech");
  CHECK(p.dim_per_token() == 13);
  const Tensor e = p.embed({7, 1, -1, -1});
  REQUIRE(e.shape() == Shape{26});
  for (std::size_t i = 0; i < 26; ++i) CHECK(std::isfinite(e.data()[i]));
  // Distinct words produce distinct cepstra.
  const Tensor f = p.embed({1, 7, -1, -1});
  CHECK(e.data()[0] != f.data()[0]);

  CHECK_THROWS_AS(EmbeddingProvider(cfg, "midi"), Error);
}

TEST_CASE("stages name the missing prerequisite") {
  const fs::path base = kBase / "missing";
  fs::remove_all(base);
  RunConfig cfg = tiny_config(base);
  CHECK_THROWS_WITH_AS(cmd_train_ae(cfg), doctest::Contains("synth-data"),
                       Error);
  cmd_synth_data(cfg);
  CHECK_THROWS_WITH_AS(cmd_train_map(cfg),
                       doctest::Contains("image model not found"), Error);
  CHECK_THROWS_WITH_AS(cmd_evaluate(cfg),
                       doctest::Contains("image model not found"), Error);
  CHECK_THROWS_WITH_AS(
      cmd_generate(cfg, "one two", "text", base / "g.png"),
      doctest::Contains("image model not found"), Error);
  fs::remove_all(base);
}

TEST_CASE("tiny end-to-end run scores both methods and reruns bit-identically") {
  fs::remove_all(kBase / "e2e");
  RunConfig cfg = tiny_config(kBase / "e2e");
  const nlohmann::json report = run_pipeline(cfg);

  REQUIRE(report["cells"].size() == 2);
  CHECK(report["cells"][0]["method"] == "proposed_mlp_vae");
  CHECK(report["cells"][1]["method"] == "direct");
  for (const auto& cell : report["cells"]) {
    CHECK(cell["modality"] == "text");
    const double mean = cell["mean_psnr"].get<double>();
    CHECK(std::isfinite(mean));
    CHECK(mean > 0.0);
    CHECK(cell["per_class"].size() == 2);
  }
  CHECK(report["dataset"]["train_count"] == 98 * 3);
  CHECK(report["dataset"]["test_count"] == 2 * 3);
  CHECK(report["dataset"]["held_out"].size() == 2);

  const fs::path eval_dir = cfg.out_dir / "eval";
  CHECK(fs::exists(eval_dir / "report.json"));
  CHECK(fs::exists(eval_dir / "table.txt"));
  CHECK(fs::exists(eval_dir / "grid_proposed_mlp_vae_text.png"));
  CHECK(fs::exists(eval_dir / "grid_direct_text.png"));
  CHECK(fs::exists(cfg.out_dir / "run_manifest.json"));

  const nlohmann::json manifest =
      nlohmann::json::parse(slurp(cfg.out_dir / "run_manifest.json"));
  CHECK(manifest["config_hash"] == config_hash(cfg));
  CHECK(manifest["stages"].contains("train-ae"));
  CHECK(manifest["stages"].contains("evaluate"));

  // Second run, same protocol, fresh output directory: the dataset is
  // reused and every derived byte matches.
  RunConfig rerun = cfg;
  rerun.out_dir = kBase / "e2e" / "run2";
  run_pipeline(rerun);
  CHECK(slurp(cfg.out_dir / "eval" / "report.json") ==
        slurp(rerun.out_dir / "eval" / "report.json"));

  // Generation works for held-out classes and writes a viewable image.
  const std::string held =
      report["dataset"]["held_out"][0].get<std::string>();
  const fs::path png = kBase / "e2e" / "gen.png";
  const Tensor img = cmd_generate(cfg, held, "text", png);
  REQUIRE(img.shape() == Shape{1, kImageHeight, kImageWidth});
  for (std::size_t i = 0; i < img.numel(); ++i) {
    CHECK(img.data()[i] > 0.0);
    CHECK(img.data()[i] < 1.0);
  }
  CHECK(fs::exists(png));

  CHECK_THROWS_WITH_AS(cmd_generate(cfg, "one twoo", "text", ""),
                       doctest::Contains("twoo"), Error);
  CHECK_THROWS_WITH_AS(cmd_generate(cfg, "one", "text", ""),
                       doctest::Contains("two digit words"), Error);
  fs::remove_all(kBase / "e2e");
}

TEST_CASE("multi-seed wrapper reruns the pipeline and averages the cells") {
  fs::remove_all(kBase / "seeds");
  RunConfig cfg = tiny_config(kBase / "seeds");
  cfg.per_class_count = 2;
  cfg.map_epochs = 1;
  const nlohmann::json combined = run_pipeline_seeds(cfg, 2);

  CHECK(combined["seeds"] == nlohmann::json({7, 8}));
  REQUIRE(combined["per_seed"].size() == 2);
  REQUIRE(combined["mean_over_seeds"].size() == 2);
  for (const auto& cell : combined["mean_over_seeds"]) {
    const auto& per_seed = cell["per_seed"];
    REQUIRE(per_seed.size() == 2);
    const double want =
        (per_seed[0].get<double>() + per_seed[1].get<double>()) / 2.0;
    CHECK(cell["mean_psnr"].get<double>() == doctest::Approx(want));
  }
  CHECK(fs::exists(cfg.out_dir / "seed_7" / "eval" / "report.json"));
  CHECK(fs::exists(cfg.out_dir / "seed_8" / "eval" / "report.json"));
  CHECK(fs::exists(cfg.out_dir / "eval" / "report.json"));
  CHECK(fs::exists(cfg.out_dir / "eval" / "table.txt"));
  fs::remove_all(kBase / "seeds");
}
