// tests/test_tensor.cpp

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

#include "cmem/tensor.hpp"

#include <doctest.h>

#include <limits>

#include "cmem/common.hpp"

using cmem::Tensor;

TEST_CASE("tensor shape and element count agree") {
  Tensor t({2, 3, 4});
  CHECK(t.numel() == 24);
  CHECK(t.rank() == 3);
  CHECK(t.shape_str() == "[2, 3, 4]");
  for (std::size_t i = 0; i < t.numel(); ++i) CHECK(t[i] == 0.0);
}

TEST_CASE("tensor data size must match shape") {
  CHECK_THROWS_AS(Tensor({2, 2}, {1.0, 2.0, 3.0}), cmem::Error);
}

TEST_CASE("row-major multi-index access") {
  Tensor t({2, 3}, {0, 1, 2, 3, 4, 5});
  CHECK(t.at({0, 2}) == 2.0);
  CHECK(t.at({1, 0}) == 3.0);
  t.at({1, 2}) = 9.0;
  CHECK(t[5] == 9.0);
}

TEST_CASE("reshape preserves data and rejects bad sizes") {
  Tensor t({2, 3}, {0, 1, 2, 3, 4, 5});
  Tensor r = t.reshaped({3, 2});
  CHECK(r.dim(0) == 3);
  CHECK(r[4] == 4.0);
  CHECK_THROWS_WITH_AS(t.reshaped({4, 2}), doctest::Contains("element count"),
                       cmem::Error);
}

TEST_CASE("all_finite catches NaN and Inf") {
  Tensor t({3});
  CHECK(t.all_finite());
  t[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK(!t.all_finite());
  t[1] = 0.0;
  t[2] = std::numeric_limits<double>::infinity();
  CHECK(!t.all_finite());
}

TEST_CASE("zero-sized dims are rejected") {
  CHECK_THROWS_AS(Tensor({2, 0, 3}), cmem::Error);
}
