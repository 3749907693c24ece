// cmem/gemm.hpp

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

#ifndef CMEM_GEMM_HPP_
#define CMEM_GEMM_HPP_

#include <cstddef>
#include <vector>

#include "cmem/tensor.hpp"

namespace cmem {

// C[M,N] = A[M,K] * B[K,N], or += when accumulate. Row-major, blocked over
// rows and depth so B chunks stay cache-resident. Summation order is fixed,
// so results are bitwise reproducible.
void gemm(const Scalar* a, const Scalar* b, Scalar* c, std::size_t m,
          std::size_t k, std::size_t n, bool accumulate = false);

// out[cols, rows] = in[rows, cols]^T.
void transpose(const Scalar* in, Scalar* out, std::size_t rows,
               std::size_t cols);

}  // namespace cmem

#endif  // CMEM_GEMM_HPP_
