// cmem/dataset.hpp

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

#ifndef CMEM_DATASET_HPP_
#define CMEM_DATASET_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmem/mnist_idx.hpp"
#include "cmem/tensor.hpp"

namespace cmem {

// Color channel indices for the colored corpus.
inline constexpr int kNumColors = 3;
const char* color_name(int color);        // 0 red, 1 green, 2 blue
int color_from_token(const std::string& token);
const char* digit_name(int digit);        // "zero" .. "nine"
int digit_from_token(const std::string& token);

// A generation class: a digit pair, optionally with one color per digit.
// 100 uncolored classes exist; 900 colored ones (digit pair x 3 x 3).
struct ComboClass {
  int d1 = 0, d2 = 0;
  int c1 = -1, c2 = -1;  // -1 means uncolored

  bool colored() const { return c1 >= 0; }
  ComboClass digit_pair() const { return {d1, d2, -1, -1}; }
  // Word sequence naming the class, colors interleaved before their digit:
  // ["seven", "five"] or ["red", "five", "blue", "one"].
  std::vector<std::string> tokens() const;
  std::string label() const;  // tokens joined with spaces

  friend bool operator==(const ComboClass&, const ComboClass&) = default;
  friend std::strong_ordering operator<=>(const ComboClass&,
                                          const ComboClass&) = default;
};

struct SplitSpec {
  std::uint64_t seed = 0;
  std::size_t per_class_count = 1000;  // samples per digit pair
  std::size_t held_out_count = 16;     // digit pairs reserved for test
  bool colored = false;
};

// Provenance of one synthesized sample: its class plus the exemplar index
// drawn for each half.
struct SampleRecord {
  ComboClass cls;
  std::uint32_t left = 0, right = 0;
};

struct DatasetManifest {
  SplitSpec spec;
  std::array<std::size_t, 10> pool_counts{};  // exemplars available per digit
  std::vector<ComboClass> held_out;           // digit pairs, sorted
  std::vector<SampleRecord> train, test;
};

// All 100 digit pairs in lexicographic order.
std::vector<ComboClass> all_digit_pairs();

// Seeded uniform draw without replacement from the 100 digit pairs.
std::vector<ComboClass> choose_held_out(std::uint64_t seed, std::size_t count);

// Builds the full sample plan. Pure function of (pool_counts, spec):
// exemplars are drawn with replacement per digit pair, and in colored mode
// the nine color pairs are tiled evenly over each digit pair's samples and
// then shuffled, so all nine appear whenever per_class_count >= 9. Held-out
// digit pairs go to test, the rest to train; the split is re-verified by
// enumeration before returning.
DatasetManifest make_manifest(const std::array<std::size_t, 10>& pool_counts,
                              const SplitSpec& spec);

// Distinct classes of a record list, sorted.
std::vector<ComboClass> distinct_classes(const std::vector<SampleRecord>& recs);

// Exemplar store, one image list per digit.
using DigitPool = std::array<std::vector<Tensor>, 10>;
DigitPool group_by_digit(std::vector<LabeledImage> images);
std::array<std::size_t, 10> pool_counts(const DigitPool& pool);

// [h, w] grayscale in [0, 1] -> [3, h, w] with the intensity placed in the
// named channel and the other channels zero.
Tensor colorize(const Tensor& gray, int color);

// Two 28x28 exemplars concatenated horizontally: [1, 28, 56] grayscale, or
// [3, 28, 56] with each half in its own color channel.
Tensor render_sample(const DigitPool& pool, const SampleRecord& rec);

// Stacks renders into [n, c, 28, 56].
Tensor render_split(const DigitPool& pool,
                    const std::vector<SampleRecord>& recs);

nlohmann::json manifest_to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const nlohmann::json& j);

// Directory layout: manifest.json plus train.cmem / test.cmem, each holding
// one u8 tensor "images" of shape [n, c, 28, 56].
void save_dataset(const std::filesystem::path& dir, const DatasetManifest& m,
                  const DigitPool& pool);

struct LoadedDataset {
  DatasetManifest manifest;
  Tensor train, test;  // [n, c, 28, 56] in [0, 1]
};
LoadedDataset load_dataset(const std::filesystem::path& dir);

}  // namespace cmem

#endif  // CMEM_DATASET_HPP_
