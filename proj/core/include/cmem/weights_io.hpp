// cmem/weights_io.hpp

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

#ifndef CMEM_WEIGHTS_IO_HPP_
#define CMEM_WEIGHTS_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cmem/layers.hpp"
#include "cmem/tensor.hpp"

namespace cmem {

// Named-tensor container. Layout, all little-endian:
//   magic "CMEM", u16 format version (currently 1), u32 tensor count,
//   then per tensor: u32 name length, UTF-8 name bytes, u32 rank,
//   rank x u32 dims, u8 dtype tag, raw values.
// Dtype tags: 1 = float64, 2 = float32, 3 = uint8. The reader rejects
// unknown versions and unknown tags.
inline constexpr std::uint16_t kCmemFormatVersion = 1;

enum class Dtype : std::uint8_t { kF64 = 1, kF32 = 2, kU8 = 3 };

struct TensorEntry {
  std::string name;
  Shape shape;
  Dtype dtype = Dtype::kF64;
  std::vector<Scalar> f64;       // kF64 / kF32 payload (f32 is widened)
  std::vector<std::uint8_t> u8;  // kU8 payload

  static TensorEntry from_tensor(std::string name, const Tensor& t,
                                 Dtype dtype = Dtype::kF64);
  static TensorEntry from_bytes(std::string name, Shape shape,
                                std::vector<std::uint8_t> bytes);
  Tensor to_tensor() const;  // u8 is scaled by 1/255 into [0, 1]
  std::size_t numel() const { return shape_numel(shape); }
};

void write_cmem_file(const std::filesystem::path& path,
                     const std::vector<TensorEntry>& entries);
std::vector<TensorEntry> read_cmem_file(const std::filesystem::path& path);

// ModelParams round trip; names and shapes must already match on load.
void save_params(const std::filesystem::path& path, const ModelParams& params);
void load_params(const std::filesystem::path& path, ModelParams& params);

}  // namespace cmem

#endif  // CMEM_WEIGHTS_IO_HPP_
