// cmem/tensor.hpp

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

#ifndef CMEM_TENSOR_HPP_
#define CMEM_TENSOR_HPP_

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace cmem {

using Scalar = double;
using Shape = std::vector<std::size_t>;

// Dense n-dimensional array, row-major. The single value type shared by
// every layer, optimizer and model in the library.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape);  // zero-filled
  Tensor(Shape shape, std::vector<Scalar> data);

  static Tensor scalar(Scalar v);
  static Tensor zeros_like(const Tensor& other);
  static Tensor full(Shape shape, Scalar v);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t i) const { return shape_[i]; }
  std::size_t numel() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  Scalar* data() { return data_.data(); }
  const Scalar* data() const { return data_.data(); }
  std::vector<Scalar>& values() { return data_; }
  const std::vector<Scalar>& values() const { return data_; }

  Scalar& operator[](std::size_t i) { return data_[i]; }
  Scalar operator[](std::size_t i) const { return data_[i]; }

  // Row-major multi-index access; bounds are the caller's problem.
  Scalar& at(std::initializer_list<std::size_t> idx);
  Scalar at(std::initializer_list<std::size_t> idx) const;

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

  // Same data, new shape; element count must match.
  Tensor reshaped(Shape shape) const;

  void fill(Scalar v);
  bool all_finite() const;

  std::string shape_str() const;  // e.g. "[2, 3, 4]"

 private:
  Shape shape_;
  std::vector<Scalar> data_;
};

std::size_t shape_numel(const Shape& shape);
std::string shape_to_string(const Shape& shape);

}  // namespace cmem

#endif  // CMEM_TENSOR_HPP_
