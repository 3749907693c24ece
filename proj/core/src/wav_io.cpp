// cmem/wav_io.cpp

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

#include "cmem/wav_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "cmem/common.hpp"

namespace cmem {

namespace {

std::uint32_t get_u32(std::ifstream& in, const char* what) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  CMEM_CHECK(in.gcount() == 4) << "wav: truncated while reading " << what;
  return std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) |
         (std::uint32_t{b[2]} << 16) | (std::uint32_t{b[3]} << 24);
}

std::uint16_t get_u16(std::ifstream& in, const char* what) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  CMEM_CHECK(in.gcount() == 2) << "wav: truncated while reading " << what;
  return static_cast<std::uint16_t>(std::uint16_t{b[0]} |
                                    (std::uint16_t{b[1]} << 8));
}

void get_tag(std::ifstream& in, char tag[4], const char* what) {
  in.read(tag, 4);
  CMEM_CHECK(in.gcount() == 4) << "wav: truncated while reading " << what;
}

void put_u32(std::ofstream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
               static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
  out.write(b, 4);
}

void put_u16(std::ofstream& out, std::uint16_t v) {
  char b[2] = {static_cast<char>(v), static_cast<char>(v >> 8)};
  out.write(b, 2);
}

}  // namespace

WavClip read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  CMEM_CHECK(in.good()) << "wav: cannot open " << path.string();
  char tag[4];
  get_tag(in, tag, "RIFF tag");
  CMEM_CHECK(std::memcmp(tag, "RIFF", 4) == 0)
      << "wav: " << path.string() << " is not a RIFF file";
  get_u32(in, "riff size");
  get_tag(in, tag, "WAVE tag");
  CMEM_CHECK(std::memcmp(tag, "WAVE", 4) == 0)
      << "wav: " << path.string() << " is not a WAVE file";

  WavClip clip;
  bool have_fmt = false, have_data = false;
  while (!have_data) {
    get_tag(in, tag, "chunk tag");
    const std::uint32_t size = get_u32(in, "chunk size");
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      CMEM_CHECK(size >= 16) << "wav: fmt chunk too small";
      const std::uint16_t format = get_u16(in, "audio format");
      const std::uint16_t channels = get_u16(in, "channel count");
      const std::uint32_t rate = get_u32(in, "sample rate");
      get_u32(in, "byte rate");
      get_u16(in, "block align");
      const std::uint16_t bits = get_u16(in, "bits per sample");
      CMEM_CHECK(format == 1) << "wav: only PCM supported, format tag "
                              << format;
      CMEM_CHECK(channels == 1) << "wav: only mono supported, got "
                                << channels << " channels";
      CMEM_CHECK(bits == 16) << "wav: only 16-bit supported, got " << bits;
      clip.sample_rate = rate;
      in.ignore(size - 16);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      CMEM_CHECK(have_fmt) << "wav: data chunk before fmt chunk";
      CMEM_CHECK(size % 2 == 0) << "wav: odd data chunk size for PCM16";
      const std::size_t n = size / 2;
      clip.samples.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint16_t raw = get_u16(in, "sample");
        const auto s = static_cast<std::int16_t>(raw);
        clip.samples[i] = s / 32768.0;
      }
      have_data = true;
    } else {
      // skip unknown chunk (word-aligned)
      in.ignore(size + (size % 2));
      CMEM_CHECK(in.good()) << "wav: truncated inside chunk "
                            << std::string(tag, 4);
    }
  }
  CMEM_CHECK(clip.sample_rate > 0) << "wav: zero sample rate";
  return clip;
}

void write_wav(const std::filesystem::path& path, const WavClip& clip) {
  CMEM_CHECK(!clip.samples.empty()) << "wav: nothing to write";
  CMEM_CHECK(clip.sample_rate > 0) << "wav: zero sample rate";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  CMEM_CHECK(out.good()) << "wav: cannot open " << path.string()
                         << " for writing";
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(clip.samples.size() * 2);
  out.write("RIFF", 4);
  put_u32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate * 2));
  put_u16(out, 2);   // block align
  put_u16(out, 16);  // bits
  out.write("data", 4);
  put_u32(out, data_bytes);
  for (Scalar s : clip.samples) {
    // Same 1/32768 step as the reader, clamped into int16 range.
    const long q = std::clamp(std::lround(std::clamp(s, -1.0, 1.0) * 32768.0),
                              -32768L, 32767L);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  CMEM_CHECK(out.good()) << "wav: write failed for " << path.string();
}

}  // namespace cmem
