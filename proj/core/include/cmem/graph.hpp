// cmem/graph.hpp

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

#ifndef CMEM_GRAPH_HPP_
#define CMEM_GRAPH_HPP_

#include <functional>
#include <vector>

#include "cmem/tensor.hpp"

namespace cmem {

class Tape;

// Handle to a node on a Tape.
struct Var {
  int idx = -1;
  Tape* tape = nullptr;

  const Tensor& value() const;
  const Shape& shape() const;
};

// Reverse-mode tape. Ops append nodes in execution order, so a single
// reverse sweep visits children before parents. One Tape per forward pass;
// build, call backward() once, read grads, discard.
//
// Layer kinds are fixed: dense, conv2d (stride 1, "same" zero padding),
// 2x2 max-pool, 2x2 nearest up-sample, relu, sigmoid, plus the loss and
// VAE primitives below. There is no general graph machinery beyond that.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Entry point for inputs and parameters. Gradients are only tracked
  // through nodes with requires_grad set (directly or via a parent).
  Var leaf(Tensor value, bool requires_grad = false);

  // Seeds d(loss)/d(loss) = 1 and sweeps the tape in reverse. loss must be
  // a scalar (shape [1]) node of this tape.
  void backward(Var loss);

  const Tensor& value(Var v) const;
  // Gradient of the last backward() target w.r.t. v. All zeros if no
  // gradient reached v.
  const Tensor& grad(Var v) const;

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    // Pulls this node's grad into its parents' grads.
    std::function<void()> backprop;
  };

  Var emit(Tensor value, bool requires_grad, std::function<void()> backprop);
  Node& node(Var v);
  const Node& node(Var v) const;
  Tensor& grad_buf(int idx);  // lazily allocates zeros

  std::vector<Node> nodes_;
  bool ran_backward_ = false;

  friend Var dense(Var x, Var w, Var b);
  friend Var conv2d_same(Var x, Var k, Var b);
  friend Var maxpool2x2(Var x);
  friend Var upsample2x2(Var x);
  friend Var relu(Var x);
  friend Var sigmoid(Var x);
  friend Var reshape(Var x, Shape shape);
  friend Var mse(Var pred, Var target);
  friend Var bce(Var pred, Var target);
  friend Var kl_diag_gaussian(Var mu, Var log_var);
  friend Var reparameterize(Var mu, Var log_var, const Tensor& eps);
  friend Var add(Var a, Var b);
  friend Var scale(Var a, Scalar c);
};

// y = x W + b with x [n, in], W [in, out], b [out].
Var dense(Var x, Var w, Var b);

// Cross-correlation, NCHW. x [n, c, h, w], k [f, c, kh, kw] (odd kernel),
// b [f]; output [n, f, h, w] (spatial size preserved by zero padding).
Var conv2d_same(Var x, Var k, Var b);

Var maxpool2x2(Var x);   // spatial dims must be even
Var upsample2x2(Var x);  // nearest-neighbor replication

Var relu(Var x);
Var sigmoid(Var x);
Var reshape(Var x, Shape shape);

// Scalar losses (shape [1]). Both sides may carry gradients.
Var mse(Var pred, Var target);
// Mean binary cross-entropy; pred clamped to [1e-7, 1 - 1e-7] and the
// gradient zeroed where the clamp is active. target must lie in [0, 1].
Var bce(Var pred, Var target);
// Sum over all elements of -1/2 (1 + log_var - mu^2 - exp(log_var)).
Var kl_diag_gaussian(Var mu, Var log_var);
// z = mu + exp(log_var / 2) * eps, eps supplied by the caller's RNG.
Var reparameterize(Var mu, Var log_var, const Tensor& eps);

Var add(Var a, Var b);
Var scale(Var a, Scalar c);

// BCE clamp bound, shared with the non-tape helpers.
inline constexpr Scalar kBceClamp = 1e-7;

}  // namespace cmem

#endif  // CMEM_GRAPH_HPP_
