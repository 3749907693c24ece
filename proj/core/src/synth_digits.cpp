// cmem/synth_digits.cpp

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

#include "cmem/synth_digits.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cmem/common.hpp"

namespace cmem {

namespace {

constexpr int kSide = 28;
constexpr int kGlyphW = 5;
constexpr int kGlyphH = 7;

// Classic 5x7 dot-matrix digits, one row per string.
const char* const kGlyphs[10][kGlyphH] = {
    {"01110", "10001", "10011", "10101", "11001", "10001", "01110"},  // 0
    {"00100", "01100", "00100", "00100", "00100", "00100", "01110"},  // 1
    {"01110", "10001", "00001", "00010", "00100", "01000", "11111"},  // 2
    {"11111", "00010", "00100", "00010", "00001", "10001", "01110"},  // 3
    {"00010", "00110", "01010", "10010", "11111", "00010", "00010"},  // 4
    {"11111", "10000", "11110", "00001", "00001", "10001", "01110"},  // 5
    {"00110", "01000", "10000", "11110", "10001", "10001", "01110"},  // 6
    {"11111", "00001", "00010", "00100", "01000", "01000", "01000"},  // 7
    {"01110", "10001", "10001", "01110", "10001", "10001", "01110"},  // 8
    {"01110", "10001", "10001", "01111", "00001", "00010", "01100"},  // 9
};

void box_blur_3x3(Tensor& img) {
  Tensor src = img;
  for (int r = 0; r < kSide; ++r)
    for (int c = 0; c < kSide; ++c) {
      Scalar acc = 0;
      int cnt = 0;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
          const int rr = r + dr, cc = c + dc;
          if (rr < 0 || cc < 0 || rr >= kSide || cc >= kSide) continue;
          acc += src[rr * kSide + cc];
          ++cnt;
        }
      img[r * kSide + c] = acc / cnt;
    }
}

}  // namespace

Tensor synth_digit_image(int digit, Rng& rng) {
  CMEM_CHECK(digit >= 0 && digit <= 9) << "synth: digit " << digit
                                       << " out of range";
  Tensor img({kSide, kSide});

  // Cell size 3 plus 0/1 extra thickness; jittered placement.
  const int cell = 3;
  const int thick = static_cast<int>(rng.index(2));
  const int gw = kGlyphW * cell + thick, gh = kGlyphH * cell + thick;
  const int jx = static_cast<int>(rng.index(5)) - 2;
  const int jy = static_cast<int>(rng.index(5)) - 2;
  const int x0 = (kSide - gw) / 2 + jx;
  const int y0 = (kSide - gh) / 2 + jy;
  const Scalar ink = 0.85 + 0.15 * rng.uniform(0.0, 1.0);

  for (int gr = 0; gr < kGlyphH; ++gr)
    for (int gc = 0; gc < kGlyphW; ++gc) {
      if (kGlyphs[digit][gr][gc] != '1') continue;
      for (int dr = 0; dr < cell + thick; ++dr)
        for (int dc = 0; dc < cell + thick; ++dc) {
          const int r = y0 + gr * cell + dr;
          const int c = x0 + gc * cell + dc;
          if (r < 0 || c < 0 || r >= kSide || c >= kSide) continue;
          img[r * kSide + c] = ink;
        }
    }

  box_blur_3x3(img);
  for (std::size_t i = 0; i < img.numel(); ++i) {
    Scalar v = img[i];
    if (v > 0.0) v += 0.02 * rng.normal();  // keep the background clean
    v = std::clamp(v, 0.0, 1.0);
    img[i] = std::lround(v * 255.0) / 255.0;  // snap to the u8 grid
  }
  return img;
}

std::vector<LabeledImage> synth_digit_pool(std::size_t per_digit,
                                           std::uint64_t seed) {
  CMEM_CHECK(per_digit > 0) << "synth: per_digit must be positive";
  std::vector<LabeledImage> out;
  out.reserve(per_digit * 10);
  for (int d = 0; d <= 9; ++d) {
    Rng rng(derive_seed(seed, "synth_digit_" + std::to_string(d)));
    for (std::size_t i = 0; i < per_digit; ++i)
      out.push_back({synth_digit_image(d, rng), d});
  }
  return out;
}

}  // namespace cmem
