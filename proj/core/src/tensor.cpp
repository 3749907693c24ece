// cmem/tensor.cpp

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

#include "cmem/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cmem/common.hpp"

namespace cmem {

std::size_t shape_numel(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string shape_to_string(const Shape& shape) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) os << ", ";
    os << shape[i];
  }
  os << "]";
  return os.str();
}

Tensor::Tensor(Shape shape)
    : shape_(std::move(shape)), data_(shape_numel(shape_), 0.0) {
  for (std::size_t d : shape_)
    CMEM_CHECK(d > 0) << "tensor dims must be positive, got "
                      << shape_to_string(shape_);
}

Tensor::Tensor(Shape shape, std::vector<Scalar> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  CMEM_CHECK(shape_numel(shape_) == data_.size())
      << "shape " << shape_to_string(shape_) << " wants "
      << shape_numel(shape_) << " values, got " << data_.size();
}

Tensor Tensor::scalar(Scalar v) { return Tensor({1}, {v}); }

Tensor Tensor::zeros_like(const Tensor& other) { return Tensor(other.shape_); }

Tensor Tensor::full(Shape shape, Scalar v) {
  Tensor t(std::move(shape));
  t.fill(v);
  return t;
}

Scalar& Tensor::at(std::initializer_list<std::size_t> idx) {
  std::size_t flat = 0;
  std::size_t d = 0;
  for (std::size_t i : idx) flat = flat * shape_[d++] + i;
  return data_[flat];
}

Scalar Tensor::at(std::initializer_list<std::size_t> idx) const {
  return const_cast<Tensor*>(this)->at(idx);
}

Tensor Tensor::reshaped(Shape shape) const {
  CMEM_CHECK(shape_numel(shape) == data_.size())
      << "reshape " << shape_str() << " -> " << shape_to_string(shape)
      << " changes element count";
  return Tensor(std::move(shape), data_);
}

void Tensor::fill(Scalar v) { std::fill(data_.begin(), data_.end(), v); }

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](Scalar v) { return std::isfinite(v); });
}

std::string Tensor::shape_str() const { return shape_to_string(shape_); }

}  // namespace cmem
