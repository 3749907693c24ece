// tests/test_dataset.cpp

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

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

#include "cmem/common.hpp"
#include "cmem/synth_digits.hpp"

using namespace cmem;
namespace fs = std::filesystem;

namespace {

std::array<std::size_t, 10> uniform_counts(std::size_t n) {
  std::array<std::size_t, 10> c{};
  c.fill(n);
  return c;
}

std::set<ComboClass> digit_pairs_of(const std::vector<SampleRecord>& recs) {
  std::set<ComboClass> out;
  for (const auto& r : recs) out.insert(r.cls.digit_pair());
  return out;
}

}  // namespace

TEST_CASE("token vocabulary round trips") {
  CHECK(digit_name(7) == std::string("seven"));
  CHECK(digit_from_token("seven") == 7);
  CHECK(color_name(0) == std::string("red"));
  CHECK(color_from_token("blue") == 2);
  CHECK_THROWS_WITH_AS(color_from_token("teal"), doctest::Contains("teal"),
                       Error);
  CHECK_THROWS_WITH_AS(digit_from_token("ten"), doctest::Contains("ten"),
                       Error);
}

TEST_CASE("class token sequences") {
  ComboClass plain{7, 5, -1, -1};
  CHECK(plain.tokens() == std::vector<std::string>{"seven", "five"});
  CHECK(plain.label() == "seven five");
  CHECK(!plain.colored());

  ComboClass colored{5, 1, 0, 2};
  CHECK(colored.tokens() ==
        std::vector<std::string>{"red", "five", "blue", "one"});
  CHECK(colored.label() == "red five blue one");
  CHECK(colored.colored());
  CHECK(colored.digit_pair() == ComboClass{5, 1, -1, -1});
}

TEST_CASE("one hundred digit pairs in order") {
  auto pairs = all_digit_pairs();
  REQUIRE(pairs.size() == 100);
  CHECK(pairs.front() == ComboClass{0, 0, -1, -1});
  CHECK(pairs.back() == ComboClass{9, 9, -1, -1});
  CHECK(std::is_sorted(pairs.begin(), pairs.end()));
}

TEST_CASE("held-out choice is a deterministic 16-subset") {
  auto a = choose_held_out(123, 16);
  auto b = choose_held_out(123, 16);
  REQUIRE(a.size() == 16);
  CHECK(a == b);
  CHECK(std::is_sorted(a.begin(), a.end()));
  CHECK(std::set<ComboClass>(a.begin(), a.end()).size() == 16);
  auto c = choose_held_out(124, 16);
  CHECK(a != c);
  CHECK_THROWS_AS(choose_held_out(1, 0), Error);
  CHECK_THROWS_AS(choose_held_out(1, 100), Error);
}

TEST_CASE("default two-digit protocol yields 84000/16000") {
  SplitSpec spec;
  spec.seed = 7;
  spec.per_class_count = 1000;
  auto m = make_manifest(uniform_counts(50), spec);
  CHECK(m.train.size() == 84000);
  CHECK(m.test.size() == 16000);
  CHECK(m.held_out.size() == 16);

  auto train_pairs = digit_pairs_of(m.train);
  auto test_pairs = digit_pairs_of(m.test);
  CHECK(train_pairs.size() == 84);
  CHECK(test_pairs.size() == 16);
  std::set<ComboClass> inter;
  std::set_intersection(train_pairs.begin(), train_pairs.end(),
                        test_pairs.begin(), test_pairs.end(),
                        std::inserter(inter, inter.begin()));
  CHECK(inter.empty());
}

TEST_CASE("colored protocol yields 336000/64000 with full color coverage") {
  SplitSpec spec;
  spec.seed = 7;
  spec.per_class_count = 4000;
  spec.colored = true;
  auto m = make_manifest(uniform_counts(50), spec);
  CHECK(m.train.size() == 336000);
  CHECK(m.test.size() == 64000);

  // 9 color pairs per held-out digit pair -> 144 distinct test classes.
  auto test_classes = distinct_classes(m.test);
  CHECK(test_classes.size() == 16 * 9);
  std::map<ComboClass, std::set<std::pair<int, int>>> colors_per_pair;
  for (const auto& r : m.test)
    colors_per_pair[r.cls.digit_pair()].insert({r.cls.c1, r.cls.c2});
  REQUIRE(colors_per_pair.size() == 16);
  for (const auto& [pair, colors] : colors_per_pair)
    CHECK(colors.size() == 9);

  // Train covers all 9 color pairs for every training digit pair too.
  std::map<ComboClass, std::set<std::pair<int, int>>> train_colors;
  for (const auto& r : m.train)
    train_colors[r.cls.digit_pair()].insert({r.cls.c1, r.cls.c2});
  REQUIRE(train_colors.size() == 84);
  for (const auto& [pair, colors] : train_colors) CHECK(colors.size() == 9);
}

TEST_CASE("every digit pair gets exactly per_class_count samples") {
  SplitSpec spec;
  spec.seed = 3;
  spec.per_class_count = 37;
  auto m = make_manifest(uniform_counts(11), spec);
  std::map<ComboClass, int> counts;
  for (const auto& r : m.train) ++counts[r.cls.digit_pair()];
  for (const auto& r : m.test) ++counts[r.cls.digit_pair()];
  REQUIRE(counts.size() == 100);
  for (const auto& [cls, n] : counts) CHECK(n == 37);
}

TEST_CASE("exemplar indices stay inside the pool") {
  std::array<std::size_t, 10> counts{};
  for (int d = 0; d <= 9; ++d) counts[d] = 3 + d;  // uneven pool
  SplitSpec spec;
  spec.seed = 5;
  spec.per_class_count = 20;
  auto m = make_manifest(counts, spec);
  for (const auto& r : m.train) {
    CHECK(r.left < counts[r.cls.d1]);
    CHECK(r.right < counts[r.cls.d2]);
  }
}

TEST_CASE("manifest is a pure function of pool counts and spec") {
  SplitSpec spec;
  spec.seed = 11;
  spec.per_class_count = 12;
  spec.colored = true;
  auto a = make_manifest(uniform_counts(9), spec);
  auto b = make_manifest(uniform_counts(9), spec);
  CHECK(manifest_to_json(a) == manifest_to_json(b));
  CHECK(manifest_to_json(a).dump() == manifest_to_json(b).dump());

  spec.seed = 12;
  auto c = make_manifest(uniform_counts(9), spec);
  CHECK(manifest_to_json(a) != manifest_to_json(c));
}

TEST_CASE("manifest json round trips") {
  SplitSpec spec;
  spec.seed = 21;
  spec.per_class_count = 10;
  spec.colored = true;
  auto m = make_manifest(uniform_counts(4), spec);
  auto j = manifest_to_json(m);
  auto back = manifest_from_json(j);
  CHECK(manifest_to_json(back) == j);
}

TEST_CASE("colorize places intensity in one channel") {
  Tensor g({2, 2}, {0.8, 0.0, 0.25, 1.0});
  Tensor r = colorize(g, 0);
  REQUIRE(r.shape() == Shape{3, 2, 2});
  CHECK(r.at({0, 0, 0}) == 0.8);
  CHECK(r.at({1, 0, 0}) == 0.0);
  CHECK(r.at({2, 0, 0}) == 0.0);
  // Per-pixel max intensity is preserved.
  for (std::size_t p = 0; p < 4; ++p) {
    const double m =
        std::max({r[0 * 4 + p], r[1 * 4 + p], r[2 * 4 + p]});
    CHECK(m == g[p]);
  }
  Tensor b = colorize(g, 2);
  CHECK(b.at({2, 1, 1}) == 1.0);
  CHECK(b.at({0, 1, 1}) == 0.0);
  CHECK_THROWS_AS(colorize(g, 3), Error);
  CHECK_THROWS_AS(colorize(g, -1), Error);
  Tensor bad({2, 2}, {1.5, 0, 0, 0});
  CHECK_THROWS_AS(colorize(bad, 0), Error);
}

TEST_CASE("rendered samples concatenate halves at width 56") {
  auto pool = group_by_digit(synth_digit_pool(3, 9));
  SampleRecord rec;
  rec.cls = {7, 5, -1, -1};
  rec.left = 1;
  rec.right = 2;
  Tensor s = render_sample(pool, rec);
  REQUIRE(s.shape() == Shape{1, 28, 56});
  for (std::size_t r = 0; r < 28; ++r)
    for (std::size_t c = 0; c < 28; ++c) {
      CHECK(s[r * 56 + c] == pool[7][1][r * 28 + c]);
      CHECK(s[r * 56 + 28 + c] == pool[5][2][r * 28 + c]);
    }
}

TEST_CASE("colored samples use disjoint channels unless colors match") {
  auto pool = group_by_digit(synth_digit_pool(2, 10));
  SampleRecord rec;
  rec.cls = {3, 8, 0, 2};  // red left, blue right
  Tensor s = render_sample(pool, rec);
  REQUIRE(s.shape() == Shape{3, 28, 56});
  // Green channel fully dark; red dark on the right, blue dark on the left.
  for (std::size_t r = 0; r < 28; ++r)
    for (std::size_t c = 0; c < 56; ++c) {
      CHECK(s[(1 * 28 + r) * 56 + c] == 0.0);
      if (c >= 28) CHECK(s[(0 * 28 + r) * 56 + c] == 0.0);
      if (c < 28) CHECK(s[(2 * 28 + r) * 56 + c] == 0.0);
    }

  SampleRecord same;
  same.cls = {3, 8, 1, 1};  // both green
  Tensor t2 = render_sample(pool, same);
  double green_mass = 0;
  for (std::size_t i = 0; i < 28 * 56; ++i)
    green_mass += t2[1 * 28 * 56 + i];
  CHECK(green_mass > 0.0);
}

TEST_CASE("render_split stacks and save/load round trips") {
  auto pool = group_by_digit(synth_digit_pool(3, 11));
  SplitSpec spec;
  spec.seed = 2;
  spec.per_class_count = 2;
  auto m = make_manifest(pool_counts(pool), spec);
  Tensor train = render_split(pool, m.train);
  CHECK(train.shape() == Shape{168, 1, 28, 56});

  const fs::path dir = fs::temp_directory_path() / "cmem_dataset_rt";
  save_dataset(dir, m, pool);
  auto ds = load_dataset(dir);
  CHECK(manifest_to_json(ds.manifest) == manifest_to_json(m));
  REQUIRE(ds.train.shape() == train.shape());
  // Pool pixels sit on the u8 grid, so quantization is lossless.
  for (std::size_t i = 0; i < train.numel(); ++i)
    CHECK(ds.train[i] == train[i]);
  REQUIRE(ds.test.shape() == Shape{32, 1, 28, 56});
  fs::remove_all(dir);
}

TEST_CASE("colored mode requires enough samples to cover color pairs") {
  SplitSpec spec;
  spec.per_class_count = 5;
  spec.colored = true;
  CHECK_THROWS_AS(make_manifest(uniform_counts(3), spec), Error);
}

TEST_CASE("empty digit slots are rejected") {
  std::array<std::size_t, 10> counts = uniform_counts(5);
  counts[4] = 0;
  SplitSpec spec;
  CHECK_THROWS_WITH_AS(make_manifest(counts, spec),
                       doctest::Contains("digit 4"), Error);
}
