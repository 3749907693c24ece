// cmem/speech.hpp

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

#ifndef CMEM_SPEECH_HPP_
#define CMEM_SPEECH_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "cmem/mfcc.hpp"
#include "cmem/tensor.hpp"
#include "cmem/wav_io.hpp"

namespace cmem {

// Deterministic dual-tone stand-in for a spoken vocabulary word; each word
// gets a fixed frequency pair, so all thirteen clips are distinct.
WavClip synth_token_clip(const std::string& token,
                         std::size_t sample_rate = 24000,
                         double duration_s = 0.5);

// Resolves vocabulary words to audio: <dir>/<token>.wav when dir is set,
// synthetic clips otherwise.
struct SpeechSource {
  std::filesystem::path dir;
  std::size_t sample_rate = 24000;
  double duration_s = 0.5;

  WavClip clip_for(const std::string& token) const;
};

// One aggregated MFCC vector per word (mean over frames), concatenated in
// token order: [len(tokens) * n_coeffs].
Tensor embed_speech(const std::vector<std::string>& tokens,
                    const SpeechSource& source, const MfccConfig& cfg = {});

}  // namespace cmem

#endif  // CMEM_SPEECH_HPP_
