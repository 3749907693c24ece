// cmem/mfcc.hpp

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

#ifndef CMEM_MFCC_HPP_
#define CMEM_MFCC_HPP_

#include <vector>

#include "cmem/tensor.hpp"
#include "cmem/wav_io.hpp"

namespace cmem {

struct MfccConfig {
  std::size_t n_coeffs = 13;
  std::size_t n_mels = 26;
  double frame_ms = 25.0;
  double hop_ms = 10.0;
};

// mel(f) = 2595 log10(1 + f / 700) and its inverse.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

// w[n] = 0.54 - 0.46 cos(2 pi n / (N - 1)); endpoints 0.08.
std::vector<Scalar> hamming_window(std::size_t n);

// Orthonormal DCT-II of x, first n_out coefficients.
Tensor dct2_orthonormal(const std::vector<Scalar>& x, std::size_t n_out);

// Frame, window, magnitude-squared FFT, triangular mel filterbank over
// 0..Nyquist, log (floored at 1e-10), DCT-II. Output [frames, n_coeffs].
// No pre-emphasis; FFT length is the next power of two >= frame length.
Tensor mfcc(const WavClip& clip, const MfccConfig& cfg = {});

// Arithmetic mean over frames: [n_coeffs].
Tensor mfcc_mean(const WavClip& clip, const MfccConfig& cfg = {});

}  // namespace cmem

#endif  // CMEM_MFCC_HPP_
