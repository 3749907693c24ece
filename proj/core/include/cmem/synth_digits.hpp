// cmem/synth_digits.hpp

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

#ifndef CMEM_SYNTH_DIGITS_HPP_
#define CMEM_SYNTH_DIGITS_HPP_

#include <cstdint>
#include <vector>

#include "cmem/mnist_idx.hpp"
#include "cmem/rng.hpp"
#include "cmem/tensor.hpp"

namespace cmem {

// Handwriting-style stand-in exemplars for environments without the real
// IDX files: 5x7 dot-matrix glyphs scaled to a 28x28 canvas with per-sample
// position, thickness and brightness jitter plus blur and noise, snapped to
// the u8 grid so byte round trips are exact.
Tensor synth_digit_image(int digit, Rng& rng);

// per_digit images for each of the ten digits, deterministic in seed.
std::vector<LabeledImage> synth_digit_pool(std::size_t per_digit,
                                           std::uint64_t seed);

}  // namespace cmem

#endif  // CMEM_SYNTH_DIGITS_HPP_
