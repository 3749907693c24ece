// tests/test_wav_io.cpp

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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "cmem/common.hpp"

using namespace cmem;
namespace fs = std::filesystem;

namespace {

fs::path tmp(const std::string& name) {
  return fs::temp_directory_path() / ("cmem_wav_" + name + ".wav");
}

}  // namespace

TEST_CASE("pcm16 round trip within quantization error") {
  WavClip clip;
  clip.sample_rate = 24000;
  clip.samples.resize(2400);
  for (std::size_t i = 0; i < clip.samples.size(); ++i)
    clip.samples[i] =
        0.8 * std::sin(2.0 * std::numbers::pi * 440.0 * i / 24000.0);
  const fs::path p = tmp("rt");
  write_wav(p, clip);
  WavClip back = read_wav(p);
  CHECK(back.sample_rate == 24000);
  REQUIRE(back.samples.size() == clip.samples.size());
  for (std::size_t i = 0; i < clip.samples.size(); ++i)
    CHECK(std::abs(back.samples[i] - clip.samples[i]) < 1.0 / 32000.0);
  CHECK(back.duration_s() == doctest::Approx(0.1));
  fs::remove(p);
}

TEST_CASE("out-of-range samples are clamped on write") {
  WavClip clip;
  clip.sample_rate = 8000;
  clip.samples = {2.0, -2.0, 0.0};
  const fs::path p = tmp("clamp");
  write_wav(p, clip);
  WavClip back = read_wav(p);
  CHECK(back.samples[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(back.samples[1] == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(back.samples[2] == 0.0);
  fs::remove(p);
}

TEST_CASE("non-riff data is rejected") {
  const fs::path p = tmp("junk");
  {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << "this is not a wav file at all........";
  }
  CHECK_THROWS_WITH_AS(read_wav(p), doctest::Contains("RIFF"), Error);
  fs::remove(p);
}

TEST_CASE("stereo files are rejected") {
  const fs::path p = tmp("stereo");
  {
    // Minimal RIFF header claiming 2 channels.
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    auto u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<char*>(&v), 4); };
    auto u16 = [&](std::uint16_t v) { out.write(reinterpret_cast<char*>(&v), 2); };
    out.write("RIFF", 4);
    u32(36);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    u32(16);
    u16(1);      // PCM
    u16(2);      // stereo
    u32(24000);
    u32(96000);
    u16(4);
    u16(16);
    out.write("data", 4);
    u32(0);
  }
  CHECK_THROWS_WITH_AS(read_wav(p), doctest::Contains("mono"), Error);
  fs::remove(p);
}

TEST_CASE("unknown chunks are skipped") {
  WavClip clip;
  clip.sample_rate = 8000;
  clip.samples = {0.25, -0.25};
  const fs::path p = tmp("chunks");
  write_wav(p, clip);
  // Splice a LIST chunk between fmt and data.
  std::ifstream in(p, std::ios::binary);
  std::vector<char> bytes(std::istreambuf_iterator<char>(in), {});
  in.close();
  std::vector<char> extra = {'L', 'I', 'S', 'T', 4, 0, 0, 0, 'x', 'y', 'z', 'w'};
  // fmt chunk ends at offset 36; insert there.
  bytes.insert(bytes.begin() + 36, extra.begin(), extra.end());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  WavClip back = read_wav(p);
  REQUIRE(back.samples.size() == 2);
  CHECK(back.samples[0] == doctest::Approx(0.25).epsilon(1e-3));
  fs::remove(p);
}

TEST_CASE("missing file names the path") {
  CHECK_THROWS_WITH_AS(read_wav("/nonexistent/audio.wav"),
                       doctest::Contains("cannot open"), Error);
}
