// cmem/gemm.cpp

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

#include "cmem/gemm.hpp"

#include <algorithm>
#include <cstring>

namespace cmem {

namespace {
constexpr std::size_t kRowBlock = 32;
constexpr std::size_t kDepthBlock = 256;
}  // namespace

void gemm(const Scalar* a, const Scalar* b, Scalar* c, std::size_t m,
          std::size_t k, std::size_t n, bool accumulate) {
  if (!accumulate) std::memset(c, 0, m * n * sizeof(Scalar));
  for (std::size_t i0 = 0; i0 < m; i0 += kRowBlock) {
    const std::size_t i1 = std::min(i0 + kRowBlock, m);
    for (std::size_t k0 = 0; k0 < k; k0 += kDepthBlock) {
      const std::size_t k1 = std::min(k0 + kDepthBlock, k);
      for (std::size_t i = i0; i < i1; ++i) {
        const Scalar* arow = a + i * k;
        Scalar* crow = c + i * n;
        for (std::size_t kk = k0; kk < k1; ++kk) {
          const Scalar av = arow[kk];
          if (av == 0.0) continue;
          const Scalar* brow = b + kk * n;
          for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
      }
    }
  }
}

void transpose(const Scalar* in, Scalar* out, std::size_t rows,
               std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out[j * rows + i] = in[i * cols + j];
}

}  // namespace cmem
