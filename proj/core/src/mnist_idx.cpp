// cmem/mnist_idx.cpp

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

#include "cmem/mnist_idx.hpp"

#include <cmath>
#include <fstream>

#include "cmem/common.hpp"

namespace cmem {

namespace {

std::uint32_t get_u32_be(std::ifstream& in, const char* what) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  CMEM_CHECK(in.gcount() == 4) << "idx: truncated file while reading " << what;
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
         (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

void put_u32_be(std::ofstream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<char*>(b), 4);
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  CMEM_CHECK(in.good()) << "idx: cannot open " << path.string();
  return in;
}

}  // namespace

std::vector<Tensor> read_idx_images(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  const std::uint32_t magic = get_u32_be(in, "magic");
  CMEM_CHECK(magic == kIdxImagesMagic)
      << "idx: wrong magic in " << path.string() << ": got 0x" << std::hex
      << magic << ", want image magic 0x803";
  const std::uint32_t count = get_u32_be(in, "image count");
  const std::uint32_t rows = get_u32_be(in, "rows");
  const std::uint32_t cols = get_u32_be(in, "cols");
  CMEM_CHECK(rows > 0 && cols > 0)
      << "idx: degenerate image dims " << rows << "x" << cols;
  const std::size_t per = std::size_t{rows} * cols;
  std::vector<std::uint8_t> buf(per);
  std::vector<Tensor> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(per));
    CMEM_CHECK(static_cast<std::size_t>(in.gcount()) == per)
        << "idx: truncated file, image " << i << " of " << count
        << " incomplete in " << path.string();
    Tensor t({rows, cols});
    for (std::size_t p = 0; p < per; ++p) t[p] = buf[p] / 255.0;
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  const std::uint32_t magic = get_u32_be(in, "magic");
  CMEM_CHECK(magic == kIdxLabelsMagic)
      << "idx: wrong magic in " << path.string() << ": got 0x" << std::hex
      << magic << ", want label magic 0x801";
  const std::uint32_t count = get_u32_be(in, "label count");
  std::vector<std::uint8_t> labels(count);
  in.read(reinterpret_cast<char*>(labels.data()), count);
  CMEM_CHECK(static_cast<std::size_t>(in.gcount()) == count)
      << "idx: truncated label file " << path.string();
  return labels;
}

std::vector<LabeledImage> load_mnist_idx(
    const std::filesystem::path& image_path,
    const std::filesystem::path& label_path) {
  std::vector<Tensor> images = read_idx_images(image_path);
  std::vector<std::uint8_t> labels = read_idx_labels(label_path);
  CMEM_CHECK(images.size() == labels.size())
      << "idx: count mismatch, " << images.size() << " images vs "
      << labels.size() << " labels";
  std::vector<LabeledImage> out;
  out.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    CMEM_CHECK(labels[i] <= 9) << "idx: label " << int{labels[i]}
                               << " out of digit range at index " << i;
    out.push_back({std::move(images[i]), int{labels[i]}});
  }
  return out;
}

void write_idx_images(const std::filesystem::path& path,
                      const std::vector<Tensor>& images) {
  CMEM_CHECK(!images.empty()) << "idx: nothing to write";
  const std::size_t rows = images[0].dim(0), cols = images[0].dim(1);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  CMEM_CHECK(out.good()) << "idx: cannot open " << path.string()
                         << " for writing";
  put_u32_be(out, kIdxImagesMagic);
  put_u32_be(out, static_cast<std::uint32_t>(images.size()));
  put_u32_be(out, static_cast<std::uint32_t>(rows));
  put_u32_be(out, static_cast<std::uint32_t>(cols));
  for (const Tensor& t : images) {
    CMEM_CHECK(t.rank() == 2 && t.dim(0) == rows && t.dim(1) == cols)
        << "idx: inconsistent image shape " << t.shape_str();
    for (std::size_t p = 0; p < t.numel(); ++p) {
      const auto b = static_cast<unsigned char>(
          std::lround(std::clamp(t[p], 0.0, 1.0) * 255.0));
      out.put(static_cast<char>(b));
    }
  }
  CMEM_CHECK(out.good()) << "idx: write failed for " << path.string();
}

void write_idx_labels(const std::filesystem::path& path,
                      const std::vector<std::uint8_t>& labels) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  CMEM_CHECK(out.good()) << "idx: cannot open " << path.string()
                         << " for writing";
  put_u32_be(out, kIdxLabelsMagic);
  put_u32_be(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()),
            static_cast<std::streamsize>(labels.size()));
  CMEM_CHECK(out.good()) << "idx: write failed for " << path.string();
}

}  // namespace cmem
