// cmem/layers.hpp

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

#ifndef CMEM_LAYERS_HPP_
#define CMEM_LAYERS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cmem/graph.hpp"
#include "cmem/rng.hpp"
#include "cmem/tensor.hpp"

namespace cmem {

enum class LayerKind {
  kDense,
  kConv2d,
  kMaxPool2x2,
  kUpsample2x2,
  kRelu,
  kSigmoid,
  kFlatten,
  kReshape,
};

// One layer of a fixed feed-forward stack. Conv layers are stride 1 with
// "same" zero padding; down/up-sampling happens only in the pool/upsample
// layers.
struct LayerSpec {
  LayerKind kind = LayerKind::kRelu;
  std::size_t in = 0, out = 0;                        // dense
  std::size_t filters = 0, channels = 0, kernel = 0;  // conv2d
  Shape target;                                       // reshape, per sample

  static LayerSpec Dense(std::size_t in, std::size_t out);
  static LayerSpec Conv2d(std::size_t filters, std::size_t channels,
                          std::size_t kernel);
  static LayerSpec MaxPool2x2() { return of(LayerKind::kMaxPool2x2); }
  static LayerSpec Upsample2x2() { return of(LayerKind::kUpsample2x2); }
  static LayerSpec Relu() { return of(LayerKind::kRelu); }
  static LayerSpec Sigmoid() { return of(LayerKind::kSigmoid); }
  static LayerSpec Flatten() { return of(LayerKind::kFlatten); }
  static LayerSpec Reshape(Shape per_sample);

  static LayerSpec of(LayerKind k) {
    LayerSpec s;
    s.kind = k;
    return s;
  }

  bool has_params() const {
    return kind == LayerKind::kDense || kind == LayerKind::kConv2d;
  }
};

using Architecture = std::vector<LayerSpec>;

// Ordered named tensor store for one or more layer stacks. Parameter names
// follow "<prefix>.<layer index>.w" / ".b" so every parameterized LayerSpec
// owns exactly one tensor group.
class ModelParams {
 public:
  ModelParams() = default;

  // Glorot-uniform initialization of every parameterized layer in arch,
  // drawn sequentially from rng.
  void add_stack(const std::string& prefix, const Architecture& arch,
                 Rng& rng);
  void add(const std::string& name, Tensor t);

  bool has(const std::string& name) const;
  Tensor& tensor(const std::string& name);
  const Tensor& tensor(const std::string& name) const;
  const std::vector<std::string>& names() const { return order_; }
  std::size_t total_values() const;

 private:
  std::vector<std::string> order_;
  std::map<std::string, Tensor> tensors_;
};

// Leaves for every named tensor on a fresh tape.
std::map<std::string, Var> bind_params(Tape& tape, const ModelParams& params,
                                       bool trainable);

// Runs a stack, pulling parameter leaves from vars by prefix.
Var run_stack(Tape& tape, const Architecture& arch, const std::string& prefix,
              const std::map<std::string, Var>& vars, Var x);

// Pure shape algebra for the same stack; batch dim passes through. Entry 0
// is the input shape, entry i + 1 the output of layer i. Kept independent
// of the tape so architecture traces can be cross-checked against an
// actual forward pass.
std::vector<Shape> trace_shapes(const Architecture& arch,
                                const Shape& input_shape);

std::string param_name(const std::string& prefix, std::size_t layer_index,
                       const char* which);

}  // namespace cmem

#endif  // CMEM_LAYERS_HPP_
