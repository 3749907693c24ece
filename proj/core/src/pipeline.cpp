// cmem/pipeline.cpp

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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "cmem/baseline.hpp"
#include "cmem/common.hpp"
#include "cmem/evaluation.hpp"
#include "cmem/image_grid.hpp"
#include "cmem/image_models.hpp"
#include "cmem/mapping.hpp"
#include "cmem/mnist_idx.hpp"
#include "cmem/png_io.hpp"
#include "cmem/rng.hpp"
#include "cmem/speech.hpp"
#include "cmem/synth_digits.hpp"
#include "cmem/token_table.hpp"

namespace fs = std::filesystem;

namespace cmem {

namespace {

// The exemplar pool stands in for a fixed external corpus, so its seed does
// not move with the run seed.
constexpr std::uint64_t kPoolSeed = 9001;

ComboClass class_from_words(const std::string& words, bool colored) {
  std::vector<std::string> tokens;
  std::istringstream is(words);
  for (std::string t; is >> t;) tokens.push_back(t);
  ComboClass cls;
  if (colored) {
    CMEM_CHECK(tokens.size() == 4)
        << "class \"" << words << "\": colored classes take four words, "
        << "color digit color digit";
    cls.c1 = color_from_token(tokens[0]);
    cls.d1 = digit_from_token(tokens[1]);
    cls.c2 = color_from_token(tokens[2]);
    cls.d2 = digit_from_token(tokens[3]);
  } else {
    CMEM_CHECK(tokens.size() == 2)
        << "class \"" << words << "\": plain classes take two digit words";
    cls.d1 = digit_from_token(tokens[0]);
    cls.d2 = digit_from_token(tokens[1]);
  }
  return cls;
}

SplitSpec split_spec(const RunConfig& cfg) {
  SplitSpec spec;
  spec.seed = cfg.seed;
  spec.per_class_count = effective_per_class(cfg);
  spec.held_out_count = cfg.held_out;
  spec.colored = cfg.colored;
  return spec;
}

DigitPool exemplar_pool(const RunConfig& cfg) {
  if (!cfg.mnist_dir.empty()) {
    const fs::path dir = cfg.mnist_dir;
    return group_by_digit(load_mnist_idx(dir / "train-images-idx3-ubyte",
                                         dir / "train-labels-idx1-ubyte"));
  }
  return group_by_digit(
      synth_digit_pool(cfg.synth_pool_per_digit, kPoolSeed));
}

LoadedDataset load_run_dataset(const RunConfig& cfg) {
  const fs::path dir = dataset_dir(cfg);
  CMEM_CHECK(fs::exists(dir / "manifest.json"))
      << "dataset not found: " << dir.string() << " (run synth-data first)";
  return load_dataset(dir);
}

fs::path model_stem(const RunConfig& cfg) {
  return cfg.out_dir / "image_model";
}

fs::path mapping_stem(const RunConfig& cfg, const std::string& modality) {
  return cfg.out_dir / ("mapping_" + modality);
}

fs::path direct_stem(const RunConfig& cfg, const std::string& modality) {
  return cfg.out_dir / ("direct_" + modality);
}

void require_artifact(const fs::path& stem, const char* what,
                      const char* stage) {
  CMEM_CHECK(fs::exists(stem.string() + ".json"))
      << what << " not found: " << stem.string() << " (run " << stage
      << " first)";
}

void check_modality(const std::string& modality) {
  CMEM_CHECK(modality == "text" || modality == "speech")
      << "unknown modality \"" << modality << "\" (want text or speech)";
}

// Modality embeddings for every record, one cached row per class.
Tensor embed_records(const EmbeddingProvider& provider,
                     const std::vector<SampleRecord>& recs) {
  const std::size_t d = recs.empty()
                            ? 0
                            : provider.embed(recs.front().cls).numel();
  Tensor out({recs.size(), d});
  std::map<ComboClass, Tensor> cache;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    auto [it, fresh] = cache.try_emplace(recs[i].cls);
    if (fresh) it->second = provider.embed(recs[i].cls);
    std::copy(it->second.data(), it->second.data() + d, out.data() + i * d);
  }
  return out;
}

void update_run_manifest(const RunConfig& cfg, const std::string& stage,
                         const std::vector<std::string>& artifacts) {
  fs::create_directories(cfg.out_dir);
  const fs::path path = cfg.out_dir / "run_manifest.json";
  nlohmann::json j;
  if (fs::exists(path)) {
    std::ifstream in(path);
    j = nlohmann::json::parse(in);
  }
  j["config"] = run_config_to_json(cfg);
  j["config_hash"] = config_hash(cfg);
  j["stages"][stage] = artifacts;
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

std::size_t grid_cols(std::size_t n) {
  std::size_t c = 1;
  while (c * c < n) ++c;
  return c;
}

}  // namespace

std::size_t effective_per_class(const RunConfig& cfg) {
  const std::size_t base =
      cfg.per_class_count ? cfg.per_class_count : (cfg.colored ? 4000 : 1000);
  auto scaled = (std::size_t)std::llround(cfg.scale * (double)base);
  return std::max<std::size_t>(scaled, cfg.colored ? 9 : 1);
}

nlohmann::json run_config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["seed"] = cfg.seed;
  j["scale"] = cfg.scale;
  j["colored"] = cfg.colored;
  j["modalities"] = cfg.modalities;
  j["per_class_count"] = cfg.per_class_count;
  j["held_out"] = cfg.held_out;
  j["synth_pool_per_digit"] = cfg.synth_pool_per_digit;
  j["mnist_dir"] = cfg.mnist_dir;
  j["model_kind"] = cfg.model_kind;
  j["mapping_variant"] = cfg.mapping_variant;
  j["ae_epochs"] = cfg.ae_epochs;
  j["map_epochs"] = cfg.map_epochs;
  j["baseline_epochs"] = cfg.baseline_epochs;
  j["batch"] = cfg.batch;
  j["lr"] = cfg.lr;
  j["w1"] = cfg.w1;
  j["w2"] = cfg.w2;
  j["w3"] = cfg.w3;
  j["token_dim"] = cfg.token_dim;
  j["token_seed"] = cfg.token_seed;
  j["token_table_file"] = cfg.token_table_file;
  j["speech_dir"] = cfg.speech_dir;
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "seed") cfg.seed = value;
    else if (key == "scale") cfg.scale = value;
    else if (key == "colored") cfg.colored = value;
    else if (key == "modalities") cfg.modalities = value.get<std::vector<std::string>>();
    else if (key == "per_class_count") cfg.per_class_count = value;
    else if (key == "held_out") cfg.held_out = value;
    else if (key == "synth_pool_per_digit") cfg.synth_pool_per_digit = value;
    else if (key == "mnist_dir") cfg.mnist_dir = value;
    else if (key == "model_kind") cfg.model_kind = value;
    else if (key == "mapping_variant") cfg.mapping_variant = value;
    else if (key == "ae_epochs") cfg.ae_epochs = value;
    else if (key == "map_epochs") cfg.map_epochs = value;
    else if (key == "baseline_epochs") cfg.baseline_epochs = value;
    else if (key == "batch") cfg.batch = value;
    else if (key == "lr") cfg.lr = value;
    else if (key == "w1") cfg.w1 = value;
    else if (key == "w2") cfg.w2 = value;
    else if (key == "w3") cfg.w3 = value;
    else if (key == "token_dim") cfg.token_dim = value;
    else if (key == "token_seed") cfg.token_seed = value;
    else if (key == "token_table_file") cfg.token_table_file = value;
    else if (key == "speech_dir") cfg.speech_dir = value;
    else if (key == "data_dir") cfg.data_dir = value.get<std::string>();
    else if (key == "out_dir") cfg.out_dir = value.get<std::string>();
    else CMEM_ERR << "config: unknown key \"" << key << "\"";
  }
  for (const std::string& m : cfg.modalities) check_modality(m);
  return cfg;
}

std::string config_hash(const RunConfig& cfg) {
  const std::string canon = run_config_to_json(cfg).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (char c : canon) {
    h ^= (unsigned char)c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

fs::path resolved_data_dir(const RunConfig& cfg) {
  if (!cfg.data_dir.empty()) return cfg.data_dir;
  if (const char* env = std::getenv("CMEM_DATA_DIR")) return env;
  return "data";
}

fs::path dataset_dir(const RunConfig& cfg) {
  std::ostringstream name;
  name << (cfg.colored ? "colored" : "plain") << "_s" << cfg.seed << "_n"
       << effective_per_class(cfg) << "_h" << cfg.held_out;
  if (cfg.mnist_dir.empty()) name << "_p" << cfg.synth_pool_per_digit;
  return resolved_data_dir(cfg) / name.str();
}

EmbeddingProvider::EmbeddingProvider(const RunConfig& cfg,
                                     const std::string& modality) {
  check_modality(modality);
  const std::vector<std::string> vocab = default_vocab();
  if (modality == "text") {
    TokenTable table =
        cfg.token_table_file.empty()
            ? synth_token_table(vocab, cfg.token_dim, cfg.token_seed)
            : load_token_table(cfg.token_table_file);
    dim_ = table.dim;
    for (const std::string& word : vocab) {
      Tensor row = embed_text({word}, table);
      token_vecs_[word].assign(row.data(), row.data() + row.numel());
    }
    return;
  }
  SpeechSource source;
  source.dir = cfg.speech_dir;
  MfccConfig mfcc_cfg;
  dim_ = mfcc_cfg.n_coeffs;
  for (const std::string& word : vocab) {
    Tensor row = embed_speech({word}, source, mfcc_cfg);
    token_vecs_[word].assign(row.data(), row.data() + row.numel());
  }
}

Tensor EmbeddingProvider::embed(const ComboClass& cls) const {
  const std::vector<std::string> tokens = cls.tokens();
  Tensor out({tokens.size() * dim_});
  std::size_t at = 0;
  for (const std::string& t : tokens) {
    const auto it = token_vecs_.find(t);
    CMEM_CHECK(it != token_vecs_.end()) << "no embedding for token \"" << t
                                        << "\"";
    std::copy(it->second.begin(), it->second.end(), out.data() + at);
    at += dim_;
  }
  return out;
}

void cmd_synth_data(const RunConfig& cfg) {
  const fs::path dir = dataset_dir(cfg);
  const SplitSpec spec = split_spec(cfg);
  if (fs::exists(dir / "manifest.json")) {
    // Already synthesized for this exact protocol; the directory name keys
    // every generating parameter.
    std::cout << "dataset ready: " << dir.string() << "\n";
    return;
  }
  DigitPool pool = exemplar_pool(cfg);
  DatasetManifest manifest = make_manifest(pool_counts(pool), spec);
  save_dataset(dir, manifest, pool);
  std::cout << "dataset written: " << dir.string() << " ("
            << manifest.train.size() << " train, " << manifest.test.size()
            << " test)\n";
  update_run_manifest(cfg, "synth-data", {dir.string()});
}

void cmd_train_ae(const RunConfig& cfg) {
  LoadedDataset data = load_run_dataset(cfg);
  ImageAutoencoder model =
      build_image_model(image_model_kind_from_name(cfg.model_kind),
                        cfg.colored ? 3 : 1, derive_seed(cfg.seed, "image_model"));
  FitConfig fit;
  fit.epochs = cfg.ae_epochs;
  fit.batch = cfg.batch;
  fit.seed = derive_seed(cfg.seed, "ae_train");
  fit.adam.lr = cfg.lr;
  fit.log = &std::cout;
  train_image_model(model, data.train, fit);
  fs::create_directories(cfg.out_dir);
  save_image_model(model, model_stem(cfg));
  update_run_manifest(cfg, "train-ae", {model_stem(cfg).string()});
}

void cmd_train_map(const RunConfig& cfg) {
  require_artifact(model_stem(cfg), "image model", "train-ae");
  LoadedDataset data = load_run_dataset(cfg);
  ImageAutoencoder image_model = load_image_model(model_stem(cfg));
  Tensor x_z = encode(image_model, data.train);

  std::vector<std::string> artifacts;
  for (const std::string& modality : cfg.modalities) {
    EmbeddingProvider provider(cfg, modality);
    Tensor y_z = embed_records(provider, data.manifest.train);
    MappingModel mapping = build_mapping(
        mapping_variant_from_name(cfg.mapping_variant),
        provider.class_dim(cfg.colored),
        derive_seed(cfg.seed, "mapping_" + modality));
    if (mapping.normalized()) fit_normalization(mapping, x_z);
    MappingTrainConfig fit;
    fit.epochs = cfg.map_epochs;
    fit.batch = cfg.batch;
    fit.seed = derive_seed(cfg.seed, "map_train_" + modality);
    fit.adam.lr = cfg.lr;
    fit.w1 = cfg.w1;
    fit.w2 = cfg.w2;
    fit.w3 = cfg.w3;
    fit.log = &std::cout;
    train_mapping(mapping, x_z, y_z, fit);
    fs::create_directories(cfg.out_dir);
    save_mapping(mapping, mapping_stem(cfg, modality));
    artifacts.push_back(mapping_stem(cfg, modality).string());
  }
  update_run_manifest(cfg, "train-map", artifacts);
}

void cmd_train_baseline(const RunConfig& cfg) {
  LoadedDataset data = load_run_dataset(cfg);
  std::vector<std::string> artifacts;
  for (const std::string& modality : cfg.modalities) {
    EmbeddingProvider provider(cfg, modality);
    Tensor y_z = embed_records(provider, data.manifest.train);
    DirectRegressor model =
        build_direct(provider.class_dim(cfg.colored), cfg.colored ? 3 : 1,
                     derive_seed(cfg.seed, "direct_" + modality));
    FitConfig fit;
    fit.epochs = cfg.baseline_epochs;
    fit.batch = cfg.batch;
    fit.seed = derive_seed(cfg.seed, "direct_train_" + modality);
    fit.adam.lr = cfg.lr;
    fit.log = &std::cout;
    train_direct(model, y_z, data.train, fit);
    fs::create_directories(cfg.out_dir);
    save_direct(model, direct_stem(cfg, modality));
    artifacts.push_back(direct_stem(cfg, modality).string());
  }
  update_run_manifest(cfg, "train-baseline", artifacts);
}

Tensor cmd_generate(const RunConfig& cfg, const std::string& class_words,
                    const std::string& modality,
                    const std::filesystem::path& out_png) {
  check_modality(modality);
  require_artifact(model_stem(cfg), "image model", "train-ae");
  require_artifact(mapping_stem(cfg, modality), "mapping", "train-map");
  const ComboClass cls = class_from_words(class_words, cfg.colored);
  EmbeddingProvider provider(cfg, modality);
  ImageAutoencoder image_model = load_image_model(model_stem(cfg));
  MappingModel mapping = load_mapping(mapping_stem(cfg, modality));
  Tensor img = translate_to_image(provider.embed(cls), mapping, image_model);
  if (!out_png.empty()) {
    if (!out_png.parent_path().empty())
      fs::create_directories(out_png.parent_path());
    Tensor flat = img.dim(0) == 1
                      ? img.reshaped({kImageHeight, kImageWidth})
                      : img;
    write_png(out_png, flat);
  }
  return img;
}

nlohmann::json cmd_evaluate(const RunConfig& cfg) {
  require_artifact(model_stem(cfg), "image model", "train-ae");
  LoadedDataset data = load_run_dataset(cfg);
  ImageAutoencoder image_model = load_image_model(model_stem(cfg));
  ClassImageIndex index = group_test_images(data.manifest, data.test);
  const std::vector<ComboClass> classes = eval_classes(data.manifest);

  const fs::path eval_dir = cfg.out_dir / "eval";
  fs::create_directories(eval_dir);

  std::vector<MethodScores> cells;
  std::vector<std::string> grids;
  for (const std::string& modality : cfg.modalities) {
    require_artifact(mapping_stem(cfg, modality), "mapping", "train-map");
    require_artifact(direct_stem(cfg, modality), "direct baseline",
                     "train-baseline");
    EmbeddingProvider provider(cfg, modality);
    MappingModel mapping = load_mapping(mapping_stem(cfg, modality));
    DirectRegressor direct = load_direct(direct_stem(cfg, modality));

    struct Entry {
      std::string method;
      std::function<Tensor(const ComboClass&)> generate;
    };
    const Entry entries[] = {
        {"proposed_" + cfg.model_kind,
         [&](const ComboClass& cls) {
           return translate_to_image(provider.embed(cls), mapping,
                                     image_model);
         }},
        {"direct",
         [&](const ComboClass& cls) {
           return predict_direct(direct, provider.embed(cls));
         }}};
    for (const Entry& entry : entries) {
      std::vector<Tensor> generated;
      auto capture = [&](const ComboClass& cls) {
        generated.push_back(entry.generate(cls));
        return generated.back();
      };
      cells.push_back(evaluate_method(entry.method, modality, capture,
                                      classes, index));
      std::vector<Tensor> flat;
      for (const Tensor& g : generated)
        flat.push_back(g.dim(0) == 1
                           ? g.reshaped({kImageHeight, kImageWidth})
                           : g);
      const std::string grid_name =
          "grid_" + entry.method + "_" + modality + ".png";
      render_grid(flat, grid_cols(flat.size()), eval_dir / grid_name);
      grids.push_back(grid_name);
    }
  }

  nlohmann::json report;
  report["config"] = run_config_to_json(cfg);
  report["config_hash"] = config_hash(cfg);
  std::vector<std::string> held_labels;
  for (const ComboClass& c : data.manifest.held_out)
    held_labels.push_back(c.label());
  report["dataset"] = {{"colored", cfg.colored},
                       {"train_count", data.manifest.train.size()},
                       {"test_count", data.manifest.test.size()},
                       {"held_out", held_labels}};
  report["cells"] = nlohmann::json::array();
  for (const MethodScores& c : cells)
    report["cells"].push_back(method_scores_to_json(c));
  report["grids"] = grids;

  std::ofstream out(eval_dir / "report.json");
  CMEM_CHECK(out.good()) << "cannot write " << (eval_dir / "report.json").string();
  out << report.dump(2) << "\n";
  std::ofstream table(eval_dir / "table.txt");
  table << format_score_table(cells);
  std::cout << format_score_table(cells);
  update_run_manifest(cfg, "evaluate", {(eval_dir / "report.json").string()});
  return report;
}

nlohmann::json run_pipeline(const RunConfig& cfg) {
  cmd_synth_data(cfg);
  cmd_train_ae(cfg);
  cmd_train_map(cfg);
  cmd_train_baseline(cfg);
  return cmd_evaluate(cfg);
}

nlohmann::json run_pipeline_seeds(const RunConfig& cfg, std::size_t seeds) {
  CMEM_CHECK(seeds > 0) << "run_pipeline_seeds: need at least one seed";
  if (seeds == 1) return run_pipeline(cfg);

  nlohmann::json combined;
  combined["config"] = run_config_to_json(cfg);
  combined["config_hash"] = config_hash(cfg);
  combined["seeds"] = nlohmann::json::array();
  combined["per_seed"] = nlohmann::json::array();

  // method|modality -> per-seed means, insertion ordered.
  std::vector<std::pair<std::string, std::vector<double>>> by_cell;
  for (std::size_t i = 0; i < seeds; ++i) {
    RunConfig run = cfg;
    run.seed = cfg.seed + i;
    run.out_dir = cfg.out_dir / ("seed_" + std::to_string(run.seed));
    nlohmann::json report = run_pipeline(run);
    combined["seeds"].push_back(run.seed);
    combined["per_seed"].push_back(
        {{"seed", run.seed}, {"cells", report["cells"]}});
    for (const auto& cell : report["cells"]) {
      const std::string key = cell["method"].get<std::string>() + "|" +
                              cell["modality"].get<std::string>();
      auto it = std::find_if(by_cell.begin(), by_cell.end(),
                             [&](const auto& e) { return e.first == key; });
      if (it == by_cell.end()) {
        by_cell.push_back({key, {}});
        it = std::prev(by_cell.end());
      }
      it->second.push_back(cell["mean_psnr"].get<double>());
    }
  }

  std::vector<MethodScores> mean_cells;
  combined["mean_over_seeds"] = nlohmann::json::array();
  for (const auto& [key, values] : by_cell) {
    const auto bar = key.find('|');
    MethodScores cell;
    cell.method = key.substr(0, bar);
    cell.modality = key.substr(bar + 1);
    double total = 0.0;
    for (double v : values) total += v;
    cell.mean_psnr = total / (double)values.size();
    mean_cells.push_back(cell);
    combined["mean_over_seeds"].push_back({{"method", cell.method},
                                           {"modality", cell.modality},
                                           {"mean_psnr", cell.mean_psnr},
                                           {"per_seed", values}});
  }

  const fs::path eval_dir = cfg.out_dir / "eval";
  fs::create_directories(eval_dir);
  std::ofstream out(eval_dir / "report.json");
  out << combined.dump(2) << "\n";
  std::ofstream table(eval_dir / "table.txt");
  table << format_score_table(mean_cells);
  std::cout << "mean over " << seeds << " seeds:\n"
            << format_score_table(mean_cells);
  return combined;
}

}  // namespace cmem
