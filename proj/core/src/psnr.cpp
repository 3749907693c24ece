// cmem/psnr.cpp

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

#include "cmem/psnr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cmem/common.hpp"

namespace cmem {

Scalar psnr_db(const Tensor& a, const Tensor& b, const PsnrOptions& opt) {
  CMEM_CHECK(a.same_shape(b)) << "psnr_db: shape mismatch " << a.shape_str()
                              << " vs " << b.shape_str();
  CMEM_CHECK(a.numel() > 0) << "psnr_db: empty tensors";
  Scalar sq = 0.0;
  for (std::size_t i = 0; i < a.numel(); ++i) {
    const Scalar d = a[i] - b[i];
    sq += d * d;
  }
  const Scalar err =
      opt.literal_norm ? std::sqrt(sq) : std::sqrt(sq / (Scalar)a.numel());
  if (err == 0.0) return opt.cap_db;
  return std::min(opt.cap_db, 20.0 * std::log10(opt.max_intensity / err));
}

NearestPsnr psnr_nearest(const Tensor& image, const Tensor& candidates,
                         const PsnrOptions& opt) {
  CMEM_CHECK(candidates.rank() == image.rank() + 1)
      << "psnr_nearest: candidates must stack images, got "
      << candidates.shape_str() << " for image " << image.shape_str();
  const std::size_t n = candidates.dim(0);
  CMEM_CHECK(n > 0) << "psnr_nearest: empty candidate stack";
  const std::size_t stride = image.numel();
  CMEM_CHECK(candidates.numel() == n * stride)
      << "psnr_nearest: candidate slice shape mismatch, got "
      << candidates.shape_str() << " for image " << image.shape_str();

  std::size_t best = 0;
  Scalar best_sq = std::numeric_limits<Scalar>::infinity();
  const Scalar* cd = candidates.data();
  for (std::size_t i = 0; i < n; ++i) {
    Scalar sq = 0.0;
    const Scalar* slice = cd + i * stride;
    for (std::size_t j = 0; j < stride; ++j) {
      const Scalar d = image[j] - slice[j];
      sq += d * d;
    }
    if (sq < best_sq) {
      best_sq = sq;
      best = i;
    }
  }

  Tensor nearest(image.shape(),
                 std::vector<Scalar>(cd + best * stride, cd + (best + 1) * stride));
  return {best, psnr_db(image, nearest, opt)};
}

}  // namespace cmem
