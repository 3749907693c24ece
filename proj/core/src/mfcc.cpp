// cmem/mfcc.cpp

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

#include "cmem/mfcc.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>

#include "cmem/common.hpp"

namespace cmem {

namespace {

constexpr double kLogFloor = 1e-10;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// [n_mels, n_bins] triangular filters with mel-spaced edges over
// 0..Nyquist; bin k sits at k * rate / nfft Hz.
std::vector<Scalar> mel_filterbank(std::size_t n_mels, std::size_t nfft,
                                   std::size_t rate) {
  const std::size_t n_bins = nfft / 2 + 1;
  const double mel_hi = hz_to_mel(rate / 2.0);
  std::vector<double> edges(n_mels + 2);
  for (std::size_t j = 0; j < edges.size(); ++j)
    edges[j] = mel_to_hz(mel_hi * j / (n_mels + 1));
  std::vector<Scalar> fb(n_mels * n_bins, 0.0);
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * rate / nfft;
      double w = 0.0;
      if (f > lo && f < mid)
        w = (f - lo) / (mid - lo);
      else if (f >= mid && f < hi)
        w = (hi - f) / (hi - mid);
      fb[m * n_bins + k] = w;
    }
  }
  return fb;
}

}  // namespace

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

std::vector<Scalar> hamming_window(std::size_t n) {
  CMEM_CHECK(n >= 2) << "hamming: window length " << n << " too small";
  std::vector<Scalar> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (n - 1));
  return w;
}

Tensor dct2_orthonormal(const std::vector<Scalar>& x, std::size_t n_out) {
  const std::size_t m = x.size();
  CMEM_CHECK(m > 0) << "dct: empty input";
  CMEM_CHECK(n_out <= m) << "dct: " << n_out << " coefficients requested "
                         << "from " << m << " inputs";
  Tensor out({n_out});
  for (std::size_t k = 0; k < n_out; ++k) {
    Scalar acc = 0;
    for (std::size_t i = 0; i < m; ++i)
      acc += x[i] * std::cos(std::numbers::pi * k * (2.0 * i + 1.0) /
                             (2.0 * m));
    const Scalar scale =
        (k == 0) ? std::sqrt(1.0 / m) : std::sqrt(2.0 / m);
    out[k] = scale * acc;
  }
  return out;
}

Tensor mfcc(const WavClip& clip, const MfccConfig& cfg) {
  CMEM_CHECK(clip.sample_rate > 0) << "mfcc: zero sample rate";
  CMEM_CHECK(cfg.n_coeffs > 0 && cfg.n_coeffs <= cfg.n_mels)
      << "mfcc: need 0 < n_coeffs <= n_mels";
  const auto frame_len = static_cast<std::size_t>(
      std::lround(clip.sample_rate * cfg.frame_ms / 1000.0));
  const auto hop = static_cast<std::size_t>(
      std::lround(clip.sample_rate * cfg.hop_ms / 1000.0));
  CMEM_CHECK(frame_len >= 2 && hop >= 1)
      << "mfcc: degenerate framing (" << frame_len << " / " << hop << ")";
  CMEM_CHECK(clip.samples.size() >= frame_len)
      << "mfcc: clip of " << clip.samples.size() << " samples too short for "
      << frame_len << "-sample frames";
  const std::size_t n_frames = 1 + (clip.samples.size() - frame_len) / hop;
  const std::size_t nfft = next_pow2(frame_len);
  const std::size_t n_bins = nfft / 2 + 1;

  const std::vector<Scalar> window = hamming_window(frame_len);
  const std::vector<Scalar> fb =
      mel_filterbank(cfg.n_mels, nfft, clip.sample_rate);

  double* in = fftw_alloc_real(nfft);
  fftw_complex* spec = fftw_alloc_complex(n_bins);
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(nfft), in, spec,
                                        FFTW_ESTIMATE);

  Tensor out({n_frames, cfg.n_coeffs});
  std::vector<Scalar> power(n_bins), log_mel(cfg.n_mels);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const Scalar* src = clip.samples.data() + f * hop;
    for (std::size_t i = 0; i < frame_len; ++i) in[i] = src[i] * window[i];
    for (std::size_t i = frame_len; i < nfft; ++i) in[i] = 0.0;
    fftw_execute(plan);
    for (std::size_t k = 0; k < n_bins; ++k)
      power[k] = spec[k][0] * spec[k][0] + spec[k][1] * spec[k][1];
    for (std::size_t m = 0; m < cfg.n_mels; ++m) {
      Scalar e = 0;
      const Scalar* w = fb.data() + m * n_bins;
      for (std::size_t k = 0; k < n_bins; ++k) e += w[k] * power[k];
      log_mel[m] = std::log(std::max(e, kLogFloor));
    }
    Tensor coeffs = dct2_orthonormal(log_mel, cfg.n_coeffs);
    for (std::size_t k = 0; k < cfg.n_coeffs; ++k)
      out[f * cfg.n_coeffs + k] = coeffs[k];
  }

  fftw_destroy_plan(plan);
  fftw_free(spec);
  fftw_free(in);
  return out;
}

Tensor mfcc_mean(const WavClip& clip, const MfccConfig& cfg) {
  Tensor frames = mfcc(clip, cfg);
  const std::size_t n = frames.dim(0), d = frames.dim(1);
  Tensor mean({d});
  for (std::size_t f = 0; f < n; ++f)
    for (std::size_t k = 0; k < d; ++k) mean[k] += frames[f * d + k];
  for (std::size_t k = 0; k < d; ++k) mean[k] /= static_cast<Scalar>(n);
  return mean;
}

}  // namespace cmem
