// cmem/speech.cpp

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

#include "cmem/speech.hpp"

#include <cmath>
#include <numbers>

#include "cmem/common.hpp"
#include "cmem/token_table.hpp"

namespace cmem {

namespace {

// Index of token in the shared vocabulary; errors name the token.
std::size_t vocab_index(const std::string& token) {
  const std::vector<std::string> vocab = default_vocab();
  for (std::size_t i = 0; i < vocab.size(); ++i)
    if (vocab[i] == token) return i;
  CMEM_ERR << "speech: no clip for unknown token \"" << token << "\"";
  return 0;  // unreachable
}

}  // namespace

WavClip synth_token_clip(const std::string& token, std::size_t sample_rate,
                         double duration_s) {
  CMEM_CHECK(sample_rate > 0) << "speech: zero sample rate";
  CMEM_CHECK(duration_s > 0) << "speech: non-positive duration";
  const std::size_t idx = vocab_index(token);
  // Word-specific frequency pair; low tone rises with the index, high tone
  // falls, so no two words share both.
  const double f1 = 320.0 + 130.0 * static_cast<double>(idx);
  const double f2 = 2500.0 - 95.0 * static_cast<double>(idx);
  WavClip clip;
  clip.sample_rate = sample_rate;
  clip.samples.resize(
      static_cast<std::size_t>(std::lround(duration_s * sample_rate)));
  for (std::size_t i = 0; i < clip.samples.size(); ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    clip.samples[i] = 0.4 * std::sin(2.0 * std::numbers::pi * f1 * t) +
                      0.3 * std::sin(2.0 * std::numbers::pi * f2 * t);
  }
  return clip;
}

WavClip SpeechSource::clip_for(const std::string& token) const {
  if (dir.empty()) return synth_token_clip(token, sample_rate, duration_s);
  const std::filesystem::path path = dir / (token + ".wav");
  WavClip clip = read_wav(path);
  CMEM_CHECK(clip.sample_rate == sample_rate)
      << "speech: " << path.string() << " has rate " << clip.sample_rate
      << ", configured rate is " << sample_rate
      << " (resampling not supported)";
  return clip;
}

Tensor embed_speech(const std::vector<std::string>& tokens,
                    const SpeechSource& source, const MfccConfig& cfg) {
  CMEM_CHECK(!tokens.empty()) << "embed_speech: empty token list";
  Tensor out({tokens.size() * cfg.n_coeffs});
  std::size_t at = 0;
  for (const std::string& token : tokens) {
    Tensor v = mfcc_mean(source.clip_for(token), cfg);
    for (std::size_t i = 0; i < v.numel(); ++i) out[at++] = v[i];
  }
  return out;
}

}  // namespace cmem
