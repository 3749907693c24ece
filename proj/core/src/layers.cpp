// cmem/layers.cpp

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

#include "cmem/layers.hpp"

#include <cmath>
#include <sstream>

#include "cmem/common.hpp"

namespace cmem {

LayerSpec LayerSpec::Dense(std::size_t in, std::size_t out) {
  CMEM_CHECK(in > 0 && out > 0) << "dense layer sizes must be positive";
  LayerSpec s = of(LayerKind::kDense);
  s.in = in;
  s.out = out;
  return s;
}

LayerSpec LayerSpec::Conv2d(std::size_t filters, std::size_t channels,
                            std::size_t kernel) {
  CMEM_CHECK(kernel % 2 == 1) << "conv kernel size must be odd, got "
                              << kernel;
  CMEM_CHECK(filters > 0 && channels > 0) << "conv sizes must be positive";
  LayerSpec s = of(LayerKind::kConv2d);
  s.filters = filters;
  s.channels = channels;
  s.kernel = kernel;
  return s;
}

LayerSpec LayerSpec::Reshape(Shape per_sample) {
  LayerSpec s = of(LayerKind::kReshape);
  s.target = std::move(per_sample);
  return s;
}

std::string param_name(const std::string& prefix, std::size_t layer_index,
                       const char* which) {
  std::ostringstream os;
  os << prefix << "." << layer_index << "." << which;
  return os.str();
}

void ModelParams::add_stack(const std::string& prefix,
                            const Architecture& arch, Rng& rng) {
  for (std::size_t i = 0; i < arch.size(); ++i) {
    const LayerSpec& l = arch[i];
    if (!l.has_params()) continue;
    std::size_t fan_in, fan_out;
    Shape wshape;
    if (l.kind == LayerKind::kDense) {
      fan_in = l.in;
      fan_out = l.out;
      wshape = {l.in, l.out};
    } else {
      fan_in = l.channels * l.kernel * l.kernel;
      fan_out = l.filters * l.kernel * l.kernel;
      wshape = {l.filters, l.channels, l.kernel, l.kernel};
    }
    const Scalar limit =
        std::sqrt(6.0 / static_cast<Scalar>(fan_in + fan_out));
    Tensor w(wshape);
    for (std::size_t j = 0; j < w.numel(); ++j)
      w[j] = rng.uniform(-limit, limit);
    add(param_name(prefix, i, "w"), std::move(w));
    add(param_name(prefix, i, "b"),
        Tensor({l.kind == LayerKind::kDense ? l.out : l.filters}));
  }
}

void ModelParams::add(const std::string& name, Tensor t) {
  CMEM_CHECK(tensors_.find(name) == tensors_.end())
      << "duplicate parameter name \"" << name << "\"";
  order_.push_back(name);
  tensors_.emplace(name, std::move(t));
}

bool ModelParams::has(const std::string& name) const {
  return tensors_.find(name) != tensors_.end();
}

Tensor& ModelParams::tensor(const std::string& name) {
  auto it = tensors_.find(name);
  CMEM_CHECK(it != tensors_.end()) << "unknown parameter \"" << name << "\"";
  return it->second;
}

const Tensor& ModelParams::tensor(const std::string& name) const {
  return const_cast<ModelParams*>(this)->tensor(name);
}

std::size_t ModelParams::total_values() const {
  std::size_t n = 0;
  for (const auto& [name, t] : tensors_) n += t.numel();
  return n;
}

std::map<std::string, Var> bind_params(Tape& tape, const ModelParams& params,
                                       bool trainable) {
  std::map<std::string, Var> vars;
  for (const std::string& name : params.names())
    vars.emplace(name, tape.leaf(params.tensor(name), trainable));
  return vars;
}

Var run_stack(Tape& tape, const Architecture& arch, const std::string& prefix,
              const std::map<std::string, Var>& vars, Var x) {
  CMEM_CHECK(x.tape == &tape) << "run_stack: input is not on the given tape";
  for (std::size_t i = 0; i < arch.size(); ++i) {
    const LayerSpec& l = arch[i];
    switch (l.kind) {
      case LayerKind::kDense: {
        Var w = vars.at(param_name(prefix, i, "w"));
        Var b = vars.at(param_name(prefix, i, "b"));
        x = dense(x, w, b);
        break;
      }
      case LayerKind::kConv2d: {
        Var w = vars.at(param_name(prefix, i, "w"));
        Var b = vars.at(param_name(prefix, i, "b"));
        x = conv2d_same(x, w, b);
        break;
      }
      case LayerKind::kMaxPool2x2:
        x = maxpool2x2(x);
        break;
      case LayerKind::kUpsample2x2:
        x = upsample2x2(x);
        break;
      case LayerKind::kRelu:
        x = relu(x);
        break;
      case LayerKind::kSigmoid:
        x = sigmoid(x);
        break;
      case LayerKind::kFlatten: {
        const Shape& s = x.shape();
        std::size_t rest = 1;
        for (std::size_t d = 1; d < s.size(); ++d) rest *= s[d];
        x = reshape(x, {s[0], rest});
        break;
      }
      case LayerKind::kReshape: {
        Shape s{x.shape()[0]};
        s.insert(s.end(), l.target.begin(), l.target.end());
        x = reshape(x, s);
        break;
      }
    }
  }
  return x;
}

std::vector<Shape> trace_shapes(const Architecture& arch,
                                const Shape& input_shape) {
  std::vector<Shape> out;
  Shape s = input_shape;
  out.push_back(s);
  for (const LayerSpec& l : arch) {
    switch (l.kind) {
      case LayerKind::kDense:
        CMEM_CHECK(s.size() == 2 && s[1] == l.in)
            << "dense expects [n, " << l.in << "], got " << shape_to_string(s);
        s = {s[0], l.out};
        break;
      case LayerKind::kConv2d:
        CMEM_CHECK(s.size() == 4 && s[1] == l.channels)
            << "conv2d expects [n, " << l.channels << ", h, w], got "
            << shape_to_string(s);
        s = {s[0], l.filters, s[2], s[3]};
        break;
      case LayerKind::kMaxPool2x2:
        CMEM_CHECK(s.size() == 4 && s[2] % 2 == 0 && s[3] % 2 == 0)
            << "maxpool2x2 needs even spatial dims, got "
            << shape_to_string(s);
        s = {s[0], s[1], s[2] / 2, s[3] / 2};
        break;
      case LayerKind::kUpsample2x2:
        CMEM_CHECK(s.size() == 4) << "upsample2x2 expects rank 4, got "
                                  << shape_to_string(s);
        s = {s[0], s[1], s[2] * 2, s[3] * 2};
        break;
      case LayerKind::kRelu:
      case LayerKind::kSigmoid:
        break;
      case LayerKind::kFlatten: {
        std::size_t rest = 1;
        for (std::size_t d = 1; d < s.size(); ++d) rest *= s[d];
        s = {s[0], rest};
        break;
      }
      case LayerKind::kReshape: {
        Shape ns{s[0]};
        ns.insert(ns.end(), l.target.begin(), l.target.end());
        CMEM_CHECK(shape_numel(ns) == shape_numel(s))
            << "reshape " << shape_to_string(s) << " -> "
            << shape_to_string(ns) << " changes element count";
        s = ns;
        break;
      }
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace cmem
