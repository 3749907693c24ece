// cmem/adam.cpp

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

#include "cmem/adam.hpp"

#include <cmath>

#include "cmem/common.hpp"

namespace cmem {

void AdamState::step(ModelParams& params,
                     const std::map<std::string, Tensor>& grads) {
  ++t_;
  const Scalar bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<Scalar>(t_));
  const Scalar bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<Scalar>(t_));
  for (const std::string& name : params.names()) {
    auto git = grads.find(name);
    if (git == grads.end()) continue;
    Tensor& p = params.tensor(name);
    const Tensor& g = git->second;
    CMEM_CHECK(g.same_shape(p))
        << "adam: gradient shape " << g.shape_str() << " does not match "
        << "parameter \"" << name << "\" " << p.shape_str();
    auto [mit, inserted] = moments_.try_emplace(name);
    if (inserted) {
      mit->second.m = Tensor(p.shape());
      mit->second.v = Tensor(p.shape());
    }
    Tensor& m = mit->second.m;
    Tensor& v = mit->second.v;
    for (std::size_t i = 0; i < p.numel(); ++i) {
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
      const Scalar mhat = m[i] / bc1;
      const Scalar vhat = v[i] / bc2;
      p[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

}  // namespace cmem
