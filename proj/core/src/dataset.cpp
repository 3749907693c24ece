// cmem/dataset.cpp

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

#include "cmem/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "cmem/common.hpp"
#include "cmem/rng.hpp"
#include "cmem/weights_io.hpp"

namespace cmem {

namespace {

constexpr int kDigitH = 28;
constexpr int kDigitW = 28;

const char* const kColorNames[kNumColors] = {"red", "green", "blue"};
const char* const kDigitNames[10] = {"zero", "one", "two",   "three", "four",
                                     "five", "six", "seven", "eight", "nine"};

void check_exemplar(const Tensor& t) {
  CMEM_CHECK(t.rank() == 2 && t.dim(0) == kDigitH && t.dim(1) == kDigitW)
      << "dataset: exemplar must be 28x28, got " << t.shape_str();
}

}  // namespace

const char* color_name(int color) {
  CMEM_CHECK(color >= 0 && color < kNumColors)
      << "dataset: color index " << color << " out of range";
  return kColorNames[color];
}

int color_from_token(const std::string& token) {
  for (int c = 0; c < kNumColors; ++c)
    if (token == kColorNames[c]) return c;
  CMEM_ERR << "dataset: unknown color \"" << token << "\"";
  return -1;  // unreachable
}

const char* digit_name(int digit) {
  CMEM_CHECK(digit >= 0 && digit <= 9)
      << "dataset: digit " << digit << " out of range";
  return kDigitNames[digit];
}

int digit_from_token(const std::string& token) {
  for (int d = 0; d <= 9; ++d)
    if (token == kDigitNames[d]) return d;
  CMEM_ERR << "dataset: unknown digit word \"" << token << "\"";
  return -1;  // unreachable
}

std::vector<std::string> ComboClass::tokens() const {
  if (colored())
    return {color_name(c1), digit_name(d1), color_name(c2), digit_name(d2)};
  return {digit_name(d1), digit_name(d2)};
}

std::string ComboClass::label() const {
  std::string out;
  for (const std::string& t : tokens()) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

std::vector<ComboClass> all_digit_pairs() {
  std::vector<ComboClass> out;
  out.reserve(100);
  for (int a = 0; a <= 9; ++a)
    for (int b = 0; b <= 9; ++b) out.push_back({a, b, -1, -1});
  return out;
}

std::vector<ComboClass> choose_held_out(std::uint64_t seed,
                                        std::size_t count) {
  CMEM_CHECK(count >= 1 && count <= 99)
      << "dataset: held-out count " << count << " must leave both splits "
      << "non-empty";
  std::vector<ComboClass> pairs = all_digit_pairs();
  Rng rng(seed);
  rng.shuffle(pairs);
  pairs.resize(count);
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

DatasetManifest make_manifest(const std::array<std::size_t, 10>& pool_counts,
                              const SplitSpec& spec) {
  for (int d = 0; d <= 9; ++d)
    CMEM_CHECK(pool_counts[d] > 0)
        << "dataset: no exemplars for digit " << d;
  CMEM_CHECK(spec.per_class_count > 0) << "dataset: per_class_count is zero";
  if (spec.colored) {
    CMEM_CHECK(spec.per_class_count >= 9)
        << "dataset: colored mode needs per_class_count >= 9 to cover the "
        << "nine color pairs, got " << spec.per_class_count;
  }

  DatasetManifest m;
  m.spec = spec;
  m.pool_counts = pool_counts;
  m.held_out = choose_held_out(derive_seed(spec.seed, "held_out"),
                               spec.held_out_count);
  const std::set<ComboClass> held(m.held_out.begin(), m.held_out.end());

  // Fixed enumeration of the nine color pairs for colored tiling.
  std::vector<std::pair<int, int>> color_pairs;
  for (int a = 0; a < kNumColors; ++a)
    for (int b = 0; b < kNumColors; ++b) color_pairs.push_back({a, b});

  for (const ComboClass& pair : all_digit_pairs()) {
    Rng rng(derive_seed(spec.seed, "combo_" + pair.label()));
    std::vector<std::pair<int, int>> colors;
    if (spec.colored) {
      colors.reserve(spec.per_class_count);
      for (std::size_t i = 0; i < spec.per_class_count; ++i)
        colors.push_back(color_pairs[i % color_pairs.size()]);
      rng.shuffle(colors);
    }
    std::vector<SampleRecord>& sink = held.count(pair) ? m.test : m.train;
    for (std::size_t i = 0; i < spec.per_class_count; ++i) {
      SampleRecord rec;
      rec.cls = pair;
      if (spec.colored) {
        rec.cls.c1 = colors[i].first;
        rec.cls.c2 = colors[i].second;
      }
      rec.left = static_cast<std::uint32_t>(rng.index(pool_counts[pair.d1]));
      rec.right = static_cast<std::uint32_t>(rng.index(pool_counts[pair.d2]));
      sink.push_back(rec);
    }
  }

  // Split hygiene, verified by enumeration.
  for (const SampleRecord& r : m.train)
    CMEM_CHECK(!held.count(r.cls.digit_pair()))
        << "dataset: held-out pair " << r.cls.digit_pair().label()
        << " leaked into train";
  for (const SampleRecord& r : m.test)
    CMEM_CHECK(held.count(r.cls.digit_pair()))
        << "dataset: non-held-out pair " << r.cls.digit_pair().label()
        << " leaked into test";
  return m;
}

std::vector<ComboClass> distinct_classes(
    const std::vector<SampleRecord>& recs) {
  std::set<ComboClass> seen;
  for (const SampleRecord& r : recs) seen.insert(r.cls);
  return {seen.begin(), seen.end()};
}

DigitPool group_by_digit(std::vector<LabeledImage> images) {
  DigitPool pool;
  for (LabeledImage& im : images) {
    CMEM_CHECK(im.label >= 0 && im.label <= 9)
        << "dataset: label " << im.label << " out of range";
    check_exemplar(im.pixels);
    pool[im.label].push_back(std::move(im.pixels));
  }
  return pool;
}

std::array<std::size_t, 10> pool_counts(const DigitPool& pool) {
  std::array<std::size_t, 10> counts{};
  for (int d = 0; d <= 9; ++d) counts[d] = pool[d].size();
  return counts;
}

Tensor colorize(const Tensor& gray, int color) {
  CMEM_CHECK(gray.rank() == 2) << "colorize: expected [h, w], got "
                               << gray.shape_str();
  CMEM_CHECK(color >= 0 && color < kNumColors)
      << "colorize: color index " << color << " out of range";
  const std::size_t h = gray.dim(0), w = gray.dim(1);
  Tensor out({static_cast<std::size_t>(kNumColors), h, w});
  for (std::size_t i = 0; i < h * w; ++i) {
    CMEM_CHECK(gray[i] >= 0.0 && gray[i] <= 1.0)
        << "colorize: pixel " << gray[i] << " outside [0, 1]";
    out[color * h * w + i] = gray[i];
  }
  return out;
}

Tensor render_sample(const DigitPool& pool, const SampleRecord& rec) {
  const ComboClass& c = rec.cls;
  CMEM_CHECK(rec.left < pool[c.d1].size() && rec.right < pool[c.d2].size())
      << "dataset: exemplar index out of range for class " << c.label();
  const Tensor& left = pool[c.d1][rec.left];
  const Tensor& right = pool[c.d2][rec.right];
  check_exemplar(left);
  check_exemplar(right);

  const std::size_t ch = c.colored() ? kNumColors : 1;
  Tensor out({ch, kDigitH, 2 * kDigitW});
  auto put_half = [&](const Tensor& src, std::size_t channel,
                      std::size_t col0) {
    for (std::size_t r = 0; r < kDigitH; ++r)
      for (std::size_t cc = 0; cc < kDigitW; ++cc)
        out[(channel * kDigitH + r) * (2 * kDigitW) + col0 + cc] =
            src[r * kDigitW + cc];
  };
  put_half(left, c.colored() ? c.c1 : 0, 0);
  put_half(right, c.colored() ? c.c2 : 0, kDigitW);
  return out;
}

Tensor render_split(const DigitPool& pool,
                    const std::vector<SampleRecord>& recs) {
  CMEM_CHECK(!recs.empty()) << "dataset: empty record list";
  const std::size_t ch = recs[0].cls.colored() ? kNumColors : 1;
  const std::size_t per = ch * kDigitH * 2 * kDigitW;
  Tensor out({recs.size(), ch, kDigitH, 2 * kDigitW});
  for (std::size_t i = 0; i < recs.size(); ++i) {
    Tensor s = render_sample(pool, recs[i]);
    CMEM_CHECK(s.numel() == per) << "dataset: mixed colored and grayscale "
                                 << "records in one split";
    std::copy(s.values().begin(), s.values().end(), out.data() + i * per);
  }
  return out;
}

nlohmann::json manifest_to_json(const DatasetManifest& m) {
  nlohmann::json j;
  j["colored"] = m.spec.colored;
  j["seed"] = m.spec.seed;
  j["per_class_count"] = m.spec.per_class_count;
  j["held_out_count"] = m.spec.held_out_count;
  j["pool_counts"] = m.pool_counts;
  nlohmann::json held = nlohmann::json::array();
  for (const ComboClass& c : m.held_out) held.push_back({c.d1, c.d2});
  j["held_out"] = std::move(held);
  auto dump_records = [](const std::vector<SampleRecord>& recs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const SampleRecord& r : recs)
      arr.push_back({r.cls.d1, r.cls.d2, r.cls.c1, r.cls.c2, r.left, r.right});
    return arr;
  };
  j["train"] = dump_records(m.train);
  j["test"] = dump_records(m.test);
  return j;
}

DatasetManifest manifest_from_json(const nlohmann::json& j) {
  DatasetManifest m;
  m.spec.colored = j.at("colored").get<bool>();
  m.spec.seed = j.at("seed").get<std::uint64_t>();
  m.spec.per_class_count = j.at("per_class_count").get<std::size_t>();
  m.spec.held_out_count = j.at("held_out_count").get<std::size_t>();
  const auto& counts = j.at("pool_counts");
  CMEM_CHECK(counts.size() == 10) << "manifest: pool_counts must list 10 "
                                  << "digits";
  for (int d = 0; d <= 9; ++d) m.pool_counts[d] = counts[d].get<std::size_t>();
  for (const auto& h : j.at("held_out"))
    m.held_out.push_back({h.at(0).get<int>(), h.at(1).get<int>(), -1, -1});
  auto read_records = [](const nlohmann::json& arr) {
    std::vector<SampleRecord> recs;
    recs.reserve(arr.size());
    for (const auto& e : arr) {
      CMEM_CHECK(e.size() == 6) << "manifest: malformed sample record";
      SampleRecord r;
      r.cls = {e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>(),
               e.at(3).get<int>()};
      r.left = e.at(4).get<std::uint32_t>();
      r.right = e.at(5).get<std::uint32_t>();
      recs.push_back(r);
    }
    return recs;
  };
  m.train = read_records(j.at("train"));
  m.test = read_records(j.at("test"));
  return m;
}

namespace {

TensorEntry quantize_split(const DigitPool& pool,
                           const std::vector<SampleRecord>& recs) {
  CMEM_CHECK(!recs.empty()) << "dataset: empty split";
  const std::size_t ch = recs[0].cls.colored() ? kNumColors : 1;
  const std::size_t per = ch * kDigitH * 2 * kDigitW;
  std::vector<std::uint8_t> bytes;
  bytes.reserve(recs.size() * per);
  for (const SampleRecord& r : recs) {
    Tensor s = render_sample(pool, r);
    CMEM_CHECK(s.numel() == per) << "dataset: mixed channel counts";
    for (std::size_t i = 0; i < per; ++i)
      bytes.push_back(static_cast<std::uint8_t>(std::lround(s[i] * 255.0)));
  }
  return TensorEntry::from_bytes(
      "images",
      {recs.size(), ch, std::size_t{kDigitH}, std::size_t{2 * kDigitW}},
      std::move(bytes));
}

}  // namespace

void save_dataset(const std::filesystem::path& dir, const DatasetManifest& m,
                  const DigitPool& pool) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "manifest.json", std::ios::trunc);
    CMEM_CHECK(out.good()) << "dataset: cannot write manifest in "
                           << dir.string();
    out << manifest_to_json(m).dump(2) << '\n';
  }
  write_cmem_file(dir / "train.cmem", {quantize_split(pool, m.train)});
  write_cmem_file(dir / "test.cmem", {quantize_split(pool, m.test)});
}

LoadedDataset load_dataset(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  CMEM_CHECK(in.good()) << "dataset: missing manifest in " << dir.string();
  nlohmann::json j;
  in >> j;
  LoadedDataset ds;
  ds.manifest = manifest_from_json(j);
  auto read_split = [&](const char* file, std::size_t want) {
    auto entries = read_cmem_file(dir / file);
    CMEM_CHECK(entries.size() == 1 && entries[0].name == "images")
        << "dataset: " << file << " must hold exactly one tensor \"images\"";
    Tensor t = entries[0].to_tensor();
    CMEM_CHECK(t.dim(0) == want)
        << "dataset: " << file << " holds " << t.dim(0)
        << " images but the manifest lists " << want;
    return t;
  };
  ds.train = read_split("train.cmem", ds.manifest.train.size());
  ds.test = read_split("test.cmem", ds.manifest.test.size());
  return ds;
}

}  // namespace cmem
