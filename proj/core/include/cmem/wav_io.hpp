// cmem/wav_io.hpp

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

#ifndef CMEM_WAV_IO_HPP_
#define CMEM_WAV_IO_HPP_

#include <filesystem>
#include <vector>

#include "cmem/tensor.hpp"

namespace cmem {

// Mono audio in [-1, 1].
struct WavClip {
  std::vector<Scalar> samples;
  std::size_t sample_rate = 24000;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// RIFF/WAVE, PCM 16-bit mono only; anything else is rejected. Unknown
// chunks are skipped on read.
WavClip read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const WavClip& clip);

}  // namespace cmem

#endif  // CMEM_WAV_IO_HPP_
