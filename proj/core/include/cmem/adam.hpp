// cmem/adam.hpp

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

#ifndef CMEM_ADAM_HPP_
#define CMEM_ADAM_HPP_

#include <cstdint>
#include <map>
#include <string>

#include "cmem/layers.hpp"
#include "cmem/tensor.hpp"

namespace cmem {

struct AdamConfig {
  Scalar lr = 1e-3;
  Scalar beta1 = 0.9;
  Scalar beta2 = 0.999;
  Scalar eps = 1e-8;
};

// Standard Adam with bias correction. Moment tensors are allocated on first
// sight of each parameter name and always mirror the parameter shape.
class AdamState {
 public:
  explicit AdamState(AdamConfig cfg = {}) : cfg_(cfg) {}

  // One update over every parameter that has a gradient entry. Increments
  // the shared step counter first, then applies bias-corrected moments.
  void step(ModelParams& params, const std::map<std::string, Tensor>& grads);

  std::int64_t t() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  struct Moments {
    Tensor m, v;
  };
  AdamConfig cfg_;
  std::map<std::string, Moments> moments_;
  std::int64_t t_ = 0;
};

}  // namespace cmem

#endif  // CMEM_ADAM_HPP_
