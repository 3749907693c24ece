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

#include "cmem/evaluation.hpp"

#include <doctest.h>

#include <set>
#include <sstream>

#include "cmem/common.hpp"
#include "cmem/rng.hpp"

using namespace cmem;

namespace {

// Two held-out digit pairs with interleaved test rows, constant-valued
// images so provenance is checkable per row.
DatasetManifest tiny_manifest() {
  DatasetManifest m;
  m.spec.colored = false;
  m.held_out = {{1, 2, -1, -1}, {3, 4, -1, -1}};
  m.test = {{{1, 2, -1, -1}, 0, 0},
            {{3, 4, -1, -1}, 0, 0},
            {{1, 2, -1, -1}, 1, 1},
            {{3, 4, -1, -1}, 1, 1},
            {{3, 4, -1, -1}, 2, 2}};
  return m;
}

Tensor tiny_test_images() {
  Tensor t({5, 1, 4, 4});
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t p = 0; p < 16; ++p) t.data()[i * 16 + p] = 0.1 * (i + 1);
  return t;
}

}  // namespace

TEST_CASE("test images group by class with rows kept in order") {
  const DatasetManifest m = tiny_manifest();
  ClassImageIndex index = group_test_images(m, tiny_test_images());

  REQUIRE(index.size() == 2);
  const Tensor& a = index.at({1, 2, -1, -1});
  const Tensor& b = index.at({3, 4, -1, -1});
  CHECK(a.shape() == Shape{2, 1, 4, 4});
  CHECK(b.shape() == Shape{3, 1, 4, 4});
  // Class (1,2) came from rows 0 and 2, class (3,4) from rows 1, 3, 4.
  CHECK(a.data()[0] == doctest::Approx(0.1));
  CHECK(a.data()[16] == doctest::Approx(0.3));
  CHECK(b.data()[0] == doctest::Approx(0.2));
  CHECK(b.data()[16] == doctest::Approx(0.4));
  CHECK(b.data()[32] == doctest::Approx(0.5));
}

TEST_CASE("grouping rejects a row-count mismatch") {
  const DatasetManifest m = tiny_manifest();
  CHECK_THROWS_AS(group_test_images(m, Tensor({4, 1, 4, 4})), Error);
}

TEST_CASE("plain eval classes are the held-out pairs") {
  const DatasetManifest m = tiny_manifest();
  const std::vector<ComboClass> classes = eval_classes(m);
  REQUIRE(classes.size() == 2);
  CHECK(classes[0].label() == "one two");
  CHECK(classes[1].label() == "three four");
}

TEST_CASE("colored eval classes expand each pair by all nine color pairs") {
  DatasetManifest m;
  m.spec.colored = true;
  m.held_out = {{7, 0, -1, -1}, {2, 2, -1, -1}};
  const std::vector<ComboClass> classes = eval_classes(m);
  REQUIRE(classes.size() == 18);
  CHECK(std::is_sorted(classes.begin(), classes.end()));
  std::set<std::string> labels;
  for (const ComboClass& c : classes) {
    CHECK(c.colored());
    labels.insert(c.label());
  }
  CHECK(labels.size() == 18);
  CHECK(labels.count("red seven green zero") == 1);
  CHECK(labels.count("blue two blue two") == 1);
}

TEST_CASE("a generator that returns an exact test image scores the cap") {
  const DatasetManifest m = tiny_manifest();
  ClassImageIndex index = group_test_images(m, tiny_test_images());
  auto copy_second = [&](const ComboClass& cls) {
    const Tensor& stack = index.at(cls);
    Tensor out({1, 4, 4});
    std::copy(stack.data() + 16, stack.data() + 32, out.data());
    return out;
  };
  MethodScores scores = evaluate_method("copier", "text", copy_second,
                                        eval_classes(m), index);
  REQUIRE(scores.classes.size() == 2);
  CHECK(scores.classes[0].psnr == doctest::Approx(100.0));
  CHECK(scores.classes[1].psnr == doctest::Approx(100.0));
  CHECK(scores.mean_psnr == doctest::Approx(100.0));
  CHECK(scores.method == "copier");
  CHECK(scores.modality == "text");
}

TEST_CASE("scoring takes the best match over the class stack") {
  const DatasetManifest m = tiny_manifest();
  ClassImageIndex index = group_test_images(m, tiny_test_images());
  // 0.32 sits nearer the 0.3 row of class (1,2) than its 0.1 row and
  // nearer the 0.4 row of class (3,4); both distances are 0.02 uniform.
  auto near = [&](const ComboClass&) {
    Tensor out({1, 4, 4});
    for (std::size_t p = 0; p < 16; ++p) out.data()[p] = 0.32;
    return out;
  };
  MethodScores scores =
      evaluate_method("m", "text", near, eval_classes(m), index);
  const Scalar want = 20.0 * std::log10(1.0 / 0.02);
  CHECK(scores.classes[0].psnr == doctest::Approx(want));
  CHECK(scores.classes[1].psnr == doctest::Approx(20.0 * std::log10(1.0 / 0.08)));
}

TEST_CASE("scoring a class with no test images is an error") {
  const DatasetManifest m = tiny_manifest();
  ClassImageIndex index = group_test_images(m, tiny_test_images());
  auto gen = [](const ComboClass&) { return Tensor({1, 4, 4}); };
  CHECK_THROWS_WITH_AS(
      evaluate_method("m", "text", gen, {{8, 8, -1, -1}}, index),
      doctest::Contains("eight eight"), Error);
}

TEST_CASE("score json carries per-class and mean values") {
  MethodScores s;
  s.method = "m";
  s.modality = "speech";
  s.classes = {{"one two", 12.5}, {"three four", 14.5}};
  s.mean_psnr = 13.5;
  nlohmann::json j = method_scores_to_json(s);
  CHECK(j["method"] == "m");
  CHECK(j["modality"] == "speech");
  CHECK(j["mean_psnr"] == doctest::Approx(13.5));
  CHECK(j["per_class"]["one two"] == doctest::Approx(12.5));
  CHECK(j["per_class"]["three four"] == doctest::Approx(14.5));
}

TEST_CASE("score table lays out methods down and modalities across") {
  std::vector<MethodScores> cells(3);
  cells[0] = {"proposed", "text", {}, 18.25};
  cells[1] = {"proposed", "speech", {}, 17.5};
  cells[2] = {"direct", "text", {}, 15.0};
  const std::string table = format_score_table(cells);

  std::istringstream is(table);
  std::string header, row1, row2;
  std::getline(is, header);
  std::getline(is, row1);
  std::getline(is, row2);
  CHECK(header.find("method") == 0);
  CHECK(header.find("text") != std::string::npos);
  CHECK(header.find("speech") != std::string::npos);
  CHECK(row1.find("proposed") == 0);
  CHECK(row1.find("18.25") != std::string::npos);
  CHECK(row1.find("17.50") != std::string::npos);
  CHECK(row2.find("direct") == 0);
  CHECK(row2.find("15.00") != std::string::npos);
  // No speech cell for direct: a dash fills the column.
  CHECK(row2.find("-") != std::string::npos);
  // Modality columns line up between header and rows.
  CHECK(header.size() == row1.size());
}
