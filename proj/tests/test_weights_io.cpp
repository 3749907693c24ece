// tests/test_weights_io.cpp

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

#include "cmem/weights_io.hpp"

#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cmem/common.hpp"
#include "cmem/layers.hpp"
#include "cmem/rng.hpp"
#include "cmem/tensor.hpp"
#include "test_util.hpp"

using namespace cmem;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& stem) {
  return fs::temp_directory_path() / ("cmem_test_" + stem + ".cmem");
}

std::vector<char> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::vector<char>(std::istreambuf_iterator<char>(in), {});
}

void dump(const fs::path& p, const std::vector<char>& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("f64 entries round trip exactly") {
  Rng rng(3);
  Tensor t = cmem_test::random_tensor({3, 4, 5}, rng);
  const fs::path p = temp_file("f64");
  write_cmem_file(p, {TensorEntry::from_tensor("weights.0.w", t)});
  auto back = read_cmem_file(p);
  REQUIRE(back.size() == 1);
  CHECK(back[0].name == "weights.0.w");
  CHECK(back[0].dtype == Dtype::kF64);
  Tensor u = back[0].to_tensor();
  REQUIRE(u.same_shape(t));
  for (std::size_t i = 0; i < t.numel(); ++i) CHECK(u[i] == t[i]);
  fs::remove(p);
}

TEST_CASE("f32 entries round trip to float precision") {
  Rng rng(4);
  Tensor t = cmem_test::random_tensor({17}, rng);
  const fs::path p = temp_file("f32");
  write_cmem_file(p, {TensorEntry::from_tensor("x", t, Dtype::kF32)});
  auto back = read_cmem_file(p);
  REQUIRE(back.size() == 1);
  CHECK(back[0].dtype == Dtype::kF32);
  Tensor u = back[0].to_tensor();
  for (std::size_t i = 0; i < t.numel(); ++i)
    CHECK(u[i] == doctest::Approx(t[i]).epsilon(1e-6));
  fs::remove(p);
}

TEST_CASE("u8 entries come back scaled into the unit interval") {
  std::vector<std::uint8_t> bytes = {0, 51, 102, 255};
  const fs::path p = temp_file("u8");
  write_cmem_file(p, {TensorEntry::from_bytes("img", {2, 2}, bytes)});
  auto back = read_cmem_file(p);
  REQUIRE(back.size() == 1);
  CHECK(back[0].dtype == Dtype::kU8);
  CHECK(back[0].u8 == bytes);
  Tensor u = back[0].to_tensor();
  CHECK(u[0] == doctest::Approx(0.0));
  CHECK(u[1] == doctest::Approx(51.0 / 255.0));
  CHECK(u[3] == doctest::Approx(1.0));
  fs::remove(p);
}

TEST_CASE("multiple entries keep their order") {
  const fs::path p = temp_file("multi");
  Tensor a({2}, {1, 2});
  Tensor b({3}, {3, 4, 5});
  write_cmem_file(p, {TensorEntry::from_tensor("a", a),
                      TensorEntry::from_tensor("b", b)});
  auto back = read_cmem_file(p);
  REQUIRE(back.size() == 2);
  CHECK(back[0].name == "a");
  CHECK(back[1].name == "b");
  fs::remove(p);
}

TEST_CASE("bad magic is rejected") {
  const fs::path p = temp_file("magic");
  write_cmem_file(p, {TensorEntry::from_tensor("a", Tensor({1}, {1.0}))});
  auto bytes = slurp(p);
  bytes[0] = 'X';
  dump(p, bytes);
  CHECK_THROWS_WITH_AS(read_cmem_file(p), doctest::Contains("magic"), Error);
  fs::remove(p);
}

TEST_CASE("unknown format version is rejected") {
  const fs::path p = temp_file("ver");
  write_cmem_file(p, {TensorEntry::from_tensor("a", Tensor({1}, {1.0}))});
  auto bytes = slurp(p);
  bytes[4] = 9;  // version lives right after the magic, little-endian u16
  dump(p, bytes);
  CHECK_THROWS_WITH_AS(read_cmem_file(p), doctest::Contains("version"), Error);
  fs::remove(p);
}

TEST_CASE("unknown dtype tag is rejected") {
  const fs::path p = temp_file("dtype");
  write_cmem_file(p, {TensorEntry::from_tensor("a", Tensor({1}, {1.0}))});
  auto bytes = slurp(p);
  // Header 10 bytes, then name len (4) + "a" (1) + rank (4) + one dim (4),
  // so the dtype tag sits at offset 23.
  REQUIRE(bytes.size() > 23);
  bytes[23] = 77;
  dump(p, bytes);
  CHECK_THROWS_WITH_AS(read_cmem_file(p), doctest::Contains("dtype"), Error);
  fs::remove(p);
}

TEST_CASE("truncated files are rejected") {
  const fs::path p = temp_file("trunc");
  Rng rng(5);
  write_cmem_file(
      p, {TensorEntry::from_tensor("w", cmem_test::random_tensor({8, 8}, rng))});
  auto bytes = slurp(p);
  for (std::size_t keep : {bytes.size() - 1, bytes.size() / 2, std::size_t{6},
                           std::size_t{2}}) {
    dump(p, std::vector<char>(bytes.begin(), bytes.begin() + keep));
    CHECK_THROWS_AS(read_cmem_file(p), Error);
  }
  fs::remove(p);
}

TEST_CASE("missing file is an error") {
  CHECK_THROWS_AS(read_cmem_file("/nonexistent/dir/x.cmem"), Error);
}

TEST_CASE("model params round trip") {
  Rng rng(6);
  Architecture arch = {LayerSpec::Dense(4, 3), LayerSpec::Relu(),
                       LayerSpec::Dense(3, 2)};
  ModelParams p;
  p.add_stack("enc", arch, rng);
  const fs::path path = temp_file("params");
  save_params(path, p);

  Rng other(777);
  ModelParams q;
  q.add_stack("enc", arch, other);  // same shapes, different values
  load_params(path, q);
  for (const auto& name : p.names()) {
    const Tensor& a = p.tensor(name);
    const Tensor& b = q.tensor(name);
    REQUIRE(a.same_shape(b));
    for (std::size_t i = 0; i < a.numel(); ++i) CHECK(a[i] == b[i]);
  }
  fs::remove(path);
}

TEST_CASE("load rejects mismatched shapes and names") {
  Rng rng(8);
  ModelParams p;
  p.add("w", cmem_test::random_tensor({3, 3}, rng));
  const fs::path path = temp_file("mismatch");
  save_params(path, p);

  ModelParams wrong_shape;
  wrong_shape.add("w", Tensor({2, 2}));
  CHECK_THROWS_AS(load_params(path, wrong_shape), Error);

  ModelParams wrong_name;
  wrong_name.add("v", Tensor({3, 3}));
  CHECK_THROWS_AS(load_params(path, wrong_name), Error);
  fs::remove(path);
}
