// cmem command line driver.

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

#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmem/common.hpp"
#include "cmem/pipeline.hpp"

namespace {

// The config file loads before flag parsing so that flags win.
cmem::RunConfig load_base_config(int argc, char** argv) {
  std::string path;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
  }
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in.good()) throw cmem::Error("cannot read config file: " + path);
  return cmem::run_config_from_json(nlohmann::json::parse(in));
}

}  // namespace

int main(int argc, char** argv) {
  try {
    cmem::RunConfig cfg = load_base_config(argc, argv);

    CLI::App app{"double-digit image synthesis from text or speech"};
    app.require_subcommand(1);
    app.fallthrough();  // flags may follow the subcommand name

    std::string config_path;
    app.add_option("--config", config_path,
                   "JSON config file; flags override its values");
    app.add_option("--seed", cfg.seed, "run seed");
    app.add_option("--scale", cfg.scale, "dataset size multiplier");
    app.add_flag("--colored,!--plain", cfg.colored,
                 "color each digit red, green or blue");
    app.add_option("--modality", cfg.modalities,
                   "conditioning modalities: text, speech")
        ->delimiter(',');
    app.add_option("--per-class", cfg.per_class_count,
                   "samples per class before scaling; 0 = dataset default");
    app.add_option("--held-out", cfg.held_out, "digit pairs reserved for test");
    app.add_option("--pool", cfg.synth_pool_per_digit,
                   "synthetic exemplars per digit");
    app.add_option("--mnist-dir", cfg.mnist_dir,
                   "directory with IDX exemplar files");
    app.add_option("--kind", cfg.model_kind,
                   "image model: conv_vae, mlp_vae, conv_ae, mlp_ae");
    app.add_option("--variant", cfg.mapping_variant,
                   "latent constraint: normalization, trainable");
    app.add_option("--ae-epochs", cfg.ae_epochs, "image model epochs");
    app.add_option("--map-epochs", cfg.map_epochs, "mapping epochs");
    app.add_option("--baseline-epochs", cfg.baseline_epochs,
                   "direct baseline epochs");
    app.add_option("--batch", cfg.batch, "minibatch size");
    app.add_option("--lr", cfg.lr, "adam learning rate");
    app.add_option("--w1", cfg.w1, "latent agreement weight");
    app.add_option("--w2", cfg.w2, "image reconstruction weight");
    app.add_option("--w3", cfg.w3, "modality reconstruction weight");
    app.add_option("--token-dim", cfg.token_dim, "text vector width");
    app.add_option("--token-seed", cfg.token_seed, "text vector seed");
    app.add_option("--token-table", cfg.token_table_file,
                   "file with one word vector per line");
    app.add_option("--speech-dir", cfg.speech_dir,
                   "directory with <word>.wav clips");
    app.add_option("--data-dir", cfg.data_dir,
                   "dataset root; $CMEM_DATA_DIR or ./data otherwise");
    app.add_option("--out-dir", cfg.out_dir, "artifact directory");

    CLI::App* synth = app.add_subcommand("synth-data", "synthesize the dataset");
    CLI::App* train_ae =
        app.add_subcommand("train-ae", "train the image autoencoder");
    CLI::App* train_map =
        app.add_subcommand("train-map", "train the embedding space mapping");
    CLI::App* train_baseline =
        app.add_subcommand("train-baseline", "train the direct regressor");

    CLI::App* generate =
        app.add_subcommand("generate", "render one class as a PNG");
    std::vector<std::string> words;
    std::string out_png;
    generate->add_option("words", words,
                         "class words, e.g. seven five or red five blue one")
        ->required();
    generate->add_option("--out", out_png, "output PNG path");

    CLI::App* evaluate =
        app.add_subcommand("evaluate", "score held-out classes");
    CLI::App* pipeline =
        app.add_subcommand("pipeline", "run every stage in order");
    std::size_t seeds = 1;
    pipeline->add_option("--seeds", seeds,
                         "independent runs at seed, seed+1, ...");

    CLI11_PARSE(app, argc, argv);

    if (synth->parsed()) {
      cmem::cmd_synth_data(cfg);
    } else if (train_ae->parsed()) {
      cmem::cmd_train_ae(cfg);
    } else if (train_map->parsed()) {
      cmem::cmd_train_map(cfg);
    } else if (train_baseline->parsed()) {
      cmem::cmd_train_baseline(cfg);
    } else if (generate->parsed()) {
      std::string cls;
      for (const std::string& w : words) {
        if (!cls.empty()) cls += ' ';
        cls += w;
      }
      if (out_png.empty())
        out_png = (cfg.out_dir / "generated.png").string();
      cmem::cmd_generate(cfg, cls, cfg.modalities.at(0), out_png);
      std::cout << "wrote " << out_png << "\n";
    } else if (evaluate->parsed()) {
      cmem::cmd_evaluate(cfg);
    } else if (pipeline->parsed()) {
      if (seeds > 1) cmem::run_pipeline_seeds(cfg, seeds);
      else cmem::run_pipeline(cfg);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
