// cmem/weights_io.cpp

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

#include "cmem/weights_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "cmem/common.hpp"

namespace cmem {

namespace {

constexpr char kMagic[4] = {'C', 'M', 'E', 'M'};

void put_bytes(std::ostream& os, const void* p, std::size_t n) {
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void put_u16(std::ostream& os, std::uint16_t v) {
  const std::uint8_t b[2] = {static_cast<std::uint8_t>(v),
                             static_cast<std::uint8_t>(v >> 8)};
  put_bytes(os, b, 2);
}

void put_u32(std::ostream& os, std::uint32_t v) {
  const std::uint8_t b[4] = {
      static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8),
      static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 24)};
  put_bytes(os, b, 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
  put_u32(os, static_cast<std::uint32_t>(v));
  put_u32(os, static_cast<std::uint32_t>(v >> 32));
}

void get_bytes(std::istream& is, void* p, std::size_t n,
               const char* context) {
  is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  CMEM_CHECK(static_cast<std::size_t>(is.gcount()) == n)
      << "truncated CMEM file while reading " << context;
}

std::uint16_t get_u16(std::istream& is, const char* ctx) {
  std::uint8_t b[2];
  get_bytes(is, b, 2, ctx);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint32_t get_u32(std::istream& is, const char* ctx) {
  std::uint8_t b[4];
  get_bytes(is, b, 4, ctx);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint64_t get_u64(std::istream& is, const char* ctx) {
  const std::uint64_t lo = get_u32(is, ctx);
  const std::uint64_t hi = get_u32(is, ctx);
  return lo | (hi << 32);
}

}  // namespace

TensorEntry TensorEntry::from_tensor(std::string name, const Tensor& t,
                                     Dtype dtype) {
  CMEM_CHECK(dtype == Dtype::kF64 || dtype == Dtype::kF32)
      << "from_tensor only handles float dtypes";
  TensorEntry e;
  e.name = std::move(name);
  e.shape = t.shape();
  e.dtype = dtype;
  e.f64 = t.values();
  return e;
}

TensorEntry TensorEntry::from_bytes(std::string name, Shape shape,
                                    std::vector<std::uint8_t> bytes) {
  CMEM_CHECK(shape_numel(shape) == bytes.size())
      << "byte tensor shape " << shape_to_string(shape) << " wants "
      << shape_numel(shape) << " values, got " << bytes.size();
  TensorEntry e;
  e.name = std::move(name);
  e.shape = std::move(shape);
  e.dtype = Dtype::kU8;
  e.u8 = std::move(bytes);
  return e;
}

Tensor TensorEntry::to_tensor() const {
  if (dtype == Dtype::kU8) {
    std::vector<Scalar> v(u8.size());
    for (std::size_t i = 0; i < u8.size(); ++i)
      v[i] = static_cast<Scalar>(u8[i]) / 255.0;
    return Tensor(shape, std::move(v));
  }
  return Tensor(shape, f64);
}

void write_cmem_file(const std::filesystem::path& path,
                     const std::vector<TensorEntry>& entries) {
  std::ofstream os(path, std::ios::binary);
  CMEM_CHECK(os.good()) << "cannot open " << path.string() << " for writing";
  put_bytes(os, kMagic, 4);
  put_u16(os, kCmemFormatVersion);
  put_u32(os, static_cast<std::uint32_t>(entries.size()));
  for (const TensorEntry& e : entries) {
    put_u32(os, static_cast<std::uint32_t>(e.name.size()));
    put_bytes(os, e.name.data(), e.name.size());
    put_u32(os, static_cast<std::uint32_t>(e.shape.size()));
    for (std::size_t d : e.shape) put_u32(os, static_cast<std::uint32_t>(d));
    const std::uint8_t tag = static_cast<std::uint8_t>(e.dtype);
    put_bytes(os, &tag, 1);
    switch (e.dtype) {
      case Dtype::kF64:
        CMEM_CHECK(e.f64.size() == e.numel()) << "entry \"" << e.name
                                              << "\" payload size mismatch";
        for (Scalar v : e.f64) put_u64(os, std::bit_cast<std::uint64_t>(v));
        break;
      case Dtype::kF32:
        CMEM_CHECK(e.f64.size() == e.numel()) << "entry \"" << e.name
                                              << "\" payload size mismatch";
        for (Scalar v : e.f64)
          put_u32(os, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
        break;
      case Dtype::kU8:
        CMEM_CHECK(e.u8.size() == e.numel()) << "entry \"" << e.name
                                             << "\" payload size mismatch";
        put_bytes(os, e.u8.data(), e.u8.size());
        break;
    }
  }
  CMEM_CHECK(os.good()) << "write failed for " << path.string();
}

std::vector<TensorEntry> read_cmem_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  CMEM_CHECK(is.good()) << "cannot open " << path.string();
  char magic[4];
  get_bytes(is, magic, 4, "magic");
  CMEM_CHECK(std::memcmp(magic, kMagic, 4) == 0)
      << path.string() << " is not a CMEM tensor file (bad magic)";
  const std::uint16_t version = get_u16(is, "version");
  CMEM_CHECK(version == kCmemFormatVersion)
      << "unsupported CMEM format version " << version << " in "
      << path.string();
  const std::uint32_t count = get_u32(is, "tensor count");
  std::vector<TensorEntry> entries;
  entries.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    TensorEntry e;
    const std::uint32_t name_len = get_u32(is, "name length");
    e.name.resize(name_len);
    get_bytes(is, e.name.data(), name_len, "name");
    const std::uint32_t rank = get_u32(is, "rank");
    e.shape.resize(rank);
    for (std::uint32_t d = 0; d < rank; ++d)
      e.shape[d] = get_u32(is, "dims");
    std::uint8_t tag;
    get_bytes(is, &tag, 1, "dtype tag");
    const std::size_t n = e.numel();
    switch (tag) {
      case 1:
        e.dtype = Dtype::kF64;
        e.f64.resize(n);
        for (std::size_t j = 0; j < n; ++j)
          e.f64[j] = std::bit_cast<Scalar>(get_u64(is, "f64 values"));
        break;
      case 2:
        e.dtype = Dtype::kF32;
        e.f64.resize(n);
        for (std::size_t j = 0; j < n; ++j)
          e.f64[j] = static_cast<Scalar>(
              std::bit_cast<float>(get_u32(is, "f32 values")));
        break;
      case 3:
        e.dtype = Dtype::kU8;
        e.u8.resize(n);
        get_bytes(is, e.u8.data(), n, "u8 values");
        break;
      default:
        CMEM_ERR << "unknown dtype tag " << static_cast<int>(tag)
                 << " for tensor \"" << e.name << "\" in " << path.string();
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void save_params(const std::filesystem::path& path,
                 const ModelParams& params) {
  std::vector<TensorEntry> entries;
  entries.reserve(params.names().size());
  for (const std::string& name : params.names())
    entries.push_back(TensorEntry::from_tensor(name, params.tensor(name)));
  write_cmem_file(path, entries);
}

void load_params(const std::filesystem::path& path, ModelParams& params) {
  for (const TensorEntry& e : read_cmem_file(path)) {
    CMEM_CHECK(params.has(e.name))
        << "weight file " << path.string() << " has unexpected tensor \""
        << e.name << "\"";
    Tensor& dst = params.tensor(e.name);
    Tensor loaded = e.to_tensor();
    CMEM_CHECK(loaded.same_shape(dst))
        << "tensor \"" << e.name << "\" shape " << loaded.shape_str()
        << " does not match expected " << dst.shape_str();
    dst = std::move(loaded);
  }
}

}  // namespace cmem
