// cmem/psnr.hpp

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

#ifndef CMEM_PSNR_HPP_
#define CMEM_PSNR_HPP_

#include <cstddef>

#include "cmem/tensor.hpp"

namespace cmem {

struct PsnrOptions {
  // Default: 20 log10(max_intensity / rmse) with rmse averaged per pixel.
  // literal_norm replaces the rmse by the unaveraged error norm
  // sqrt(sum (a - b)^2), which shrinks the score as images grow.
  bool literal_norm = false;
  Scalar max_intensity = 1.0;
  Scalar cap_db = 100.0;  // reported for an exact match instead of +inf
};

Scalar psnr_db(const Tensor& a, const Tensor& b, const PsnrOptions& opt = {});

struct NearestPsnr {
  std::size_t index = 0;  // candidate closest in squared L2, lowest index wins ties
  Scalar psnr = 0.0;      // psnr_db against that candidate
};

// candidates is a stack [n, ...image dims...]; image must match one slice.
NearestPsnr psnr_nearest(const Tensor& image, const Tensor& candidates,
                         const PsnrOptions& opt = {});

}  // namespace cmem

#endif  // CMEM_PSNR_HPP_
