// tests/test_autodiff.cpp

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

// Gradient checks. Every differentiable op is exercised through central
// finite differences on a freshly replayed forward pass, so a bug in the
// backward code cannot hide behind the same bug in the oracle.

#include <doctest.h>

#include <cmath>
#include <map>
#include <string>

#include "cmem/common.hpp"
#include "cmem/graph.hpp"
#include "cmem/rng.hpp"
#include "cmem/tensor.hpp"
#include "test_util.hpp"

using namespace cmem;
using cmem_test::FdReport;
using cmem_test::LossFn;
using cmem_test::ParamMap;
using cmem_test::random_tensor;

namespace {

constexpr double kFdStep = 1e-5;
constexpr double kFdTol = 1e-4;

using VarMap = std::map<std::string, Var>;
// Builds a scalar loss from named leaves. Called once with tracked leaves
// for the analytic gradient and many times with plain leaves for the
// differencing.
using GraphFn = std::function<Var(Tape&, const VarMap&)>;

double max_fd_error(const GraphFn& g, const ParamMap& init, Rng& rng,
                    std::size_t max_entries = 12) {
  Tape t;
  VarMap vars;
  for (const auto& [name, value] : init) vars[name] = t.leaf(value, true);
  Var loss = g(t, vars);
  t.backward(loss);
  ParamMap analytic;
  for (const auto& [name, v] : vars) analytic[name] = t.grad(v);
  LossFn lf = [&g](const ParamMap& p) {
    Tape replay;
    VarMap vs;
    for (const auto& [name, value] : p) vs[name] = replay.leaf(value);
    return g(replay, vs).value()[0];
  };
  FdReport rep = cmem_test::finite_diff_check(lf, init, analytic, kFdStep,
                                              max_entries, rng);
  CHECK(rep.entries_checked > 0);
  return rep.max_rel_err;
}

}  // namespace

TEST_CASE("hand derivative of mse(w x, 0)") {
  // loss = (w x)^2 with x = 2, so dloss/dw = 2 w x^2 = 8 at w = 1.
  Tape t;
  Var x = t.leaf(Tensor({1, 1}, {2.0}));
  Var w = t.leaf(Tensor({1, 1}, {1.0}), true);
  Var b = t.leaf(Tensor({1}), true);
  Var target = t.leaf(Tensor({1, 1}, {0.0}));
  Var loss = mse(dense(x, w, b), target);
  t.backward(loss);
  CHECK(t.grad(w)[0] == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(t.grad(b)[0] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("dense gradients vs finite differences") {
  for (unsigned seed : {1u, 2u, 3u, 4u}) {
    Rng rng(seed);
    ParamMap init;
    init["x"] = random_tensor({3, 5}, rng);
    init["w"] = random_tensor({5, 4}, rng, 0.5);
    init["b"] = random_tensor({4}, rng, 0.1);
    init["t"] = random_tensor({3, 4}, rng);
    GraphFn g = [](Tape& tp, const VarMap& v) {
      return mse(dense(v.at("x"), v.at("w"), v.at("b")), v.at("t"));
    };
    CHECK(max_fd_error(g, init, rng) < kFdTol);
  }
}

TEST_CASE("dense relu gradients vs finite differences") {
  for (unsigned seed : {11u, 12u, 13u}) {
    Rng rng(seed);
    ParamMap init;
    init["x"] = random_tensor({2, 6}, rng);
    init["w"] = random_tensor({6, 3}, rng, 0.5);
    init["b"] = random_tensor({3}, rng, 0.1);
    init["t"] = random_tensor({2, 3}, rng);
    GraphFn g = [](Tape& tp, const VarMap& v) {
      return mse(relu(dense(v.at("x"), v.at("w"), v.at("b"))), v.at("t"));
    };
    CHECK(max_fd_error(g, init, rng) < kFdTol);
  }
}

TEST_CASE("dense sigmoid bce gradients vs finite differences") {
  for (unsigned seed : {21u, 22u, 23u}) {
    Rng rng(seed);
    ParamMap init;
    init["x"] = random_tensor({2, 4}, rng);
    init["w"] = random_tensor({4, 3}, rng, 0.5);
    init["b"] = random_tensor({3}, rng, 0.1);
    Tensor target({2, 3});
    for (std::size_t i = 0; i < target.numel(); ++i)
      target[i] = rng.uniform(0.0, 1.0);
    init["t"] = target;
    GraphFn g = [](Tape& tp, const VarMap& v) {
      return bce(sigmoid(dense(v.at("x"), v.at("w"), v.at("b"))), v.at("t"));
    };
    CHECK(max_fd_error(g, init, rng) < kFdTol);
  }
}

TEST_CASE("conv2d_same gradients vs finite differences") {
  for (unsigned seed : {31u, 32u, 33u}) {
    Rng rng(seed);
    ParamMap init;
    init["x"] = random_tensor({2, 2, 5, 6}, rng);
    init["k"] = random_tensor({3, 2, 3, 3}, rng, 0.5);
    init["b"] = random_tensor({3}, rng, 0.1);
    init["t"] = random_tensor({2, 3, 5, 6}, rng);
    GraphFn g = [](Tape& tp, const VarMap& v) {
      return mse(conv2d_same(v.at("x"), v.at("k"), v.at("b")), v.at("t"));
    };
    CHECK(max_fd_error(g, init, rng) < kFdTol);
  }
}

TEST_CASE("maxpool2x2 gradients vs finite differences") {
  for (unsigned seed : {41u, 42u, 43u}) {
    Rng rng(seed);
    ParamMap init;
    // Random normals: window ties that would flip the argmax under the
    // differencing step are measure-zero and the seeds are fixed.
    init["x"] = random_tensor({2, 2, 4, 6}, rng);
    init["t"] = random_tensor({2, 2, 2, 3}, rng);
    GraphFn g = [](Tape& tp, const VarMap& v) {
      return mse(maxpool2x2(v.at("x")), v.at("t"));
    };
    CHECK(max_fd_error(g, init, rng) < kFdTol);
  }
}

TEST_CASE("maxpool routes gradient to the argmax only") {
  Tape t;
  Var x = t.leaf(Tensor({1, 1, 2, 2}, {1, 7, 3, 5}), true);
  Var target = t.leaf(Tensor({1, 1, 1, 1}, {0.0}));
  t.backward(mse(maxpool2x2(x), target));
  const Tensor& g = t.grad(x);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == doctest::Approx(14.0));  // 2 * (7 - 0)
  CHECK(g[2] == 0.0);
  CHECK(g[3] == 0.0);
}

TEST_CASE("upsample2x2 gradients vs finite differences") {
  for (unsigned seed : {51u, 52u, 53u}) {
    Rng rng(seed);
    ParamMap init;
    init["x"] = random_tensor({2, 3, 3, 4}, rng);
    init["t"] = random_tensor({2, 3, 6, 8}, rng);
    GraphFn g = [](Tape& tp, const VarMap& v) {
      return mse(upsample2x2(v.at("x")), v.at("t"));
    };
    CHECK(max_fd_error(g, init, rng) < kFdTol);
  }
}

TEST_CASE("reshape gradients vs finite differences") {
  for (unsigned seed : {61u, 62u}) {
    Rng rng(seed);
    ParamMap init;
    init["x"] = random_tensor({2, 3, 4}, rng);
    init["t"] = random_tensor({6, 4}, rng);
    GraphFn g = [](Tape& tp, const VarMap& v) {
      return mse(reshape(v.at("x"), {6, 4}), v.at("t"));
    };
    CHECK(max_fd_error(g, init, rng) < kFdTol);
  }
}

TEST_CASE("kl_diag_gaussian gradients vs finite differences") {
  for (unsigned seed : {71u, 72u, 73u}) {
    Rng rng(seed);
    ParamMap init;
    init["mu"] = random_tensor({2, 5}, rng);
    init["lv"] = random_tensor({2, 5}, rng, 0.5);
    GraphFn g = [](Tape& tp, const VarMap& v) {
      return kl_diag_gaussian(v.at("mu"), v.at("lv"));
    };
    CHECK(max_fd_error(g, init, rng) < kFdTol);
  }
}

TEST_CASE("reparameterize gradients vs finite differences") {
  for (unsigned seed : {81u, 82u, 83u}) {
    Rng rng(seed);
    ParamMap init;
    init["mu"] = random_tensor({2, 4}, rng);
    init["lv"] = random_tensor({2, 4}, rng, 0.5);
    init["t"] = random_tensor({2, 4}, rng);
    const Tensor eps = random_tensor({2, 4}, rng);
    GraphFn g = [eps](Tape& tp, const VarMap& v) {
      return mse(reparameterize(v.at("mu"), v.at("lv"), eps), v.at("t"));
    };
    CHECK(max_fd_error(g, init, rng) < kFdTol);
  }
}

TEST_CASE("add and scale gradients vs finite differences") {
  for (unsigned seed : {91u, 92u}) {
    Rng rng(seed);
    ParamMap init;
    init["a"] = random_tensor({3, 3}, rng);
    init["b"] = random_tensor({3, 3}, rng);
    init["t"] = random_tensor({3, 3}, rng);
    GraphFn g = [](Tape& tp, const VarMap& v) {
      return mse(scale(add(v.at("a"), v.at("b")), 1.7), v.at("t"));
    };
    CHECK(max_fd_error(g, init, rng) < kFdTol);
  }
}

TEST_CASE("mse gradient flows into both sides") {
  Rng rng(101);
  ParamMap init;
  init["p"] = random_tensor({4}, rng);
  init["q"] = random_tensor({4}, rng);
  GraphFn g = [](Tape& tp, const VarMap& v) {
    return mse(v.at("p"), v.at("q"));
  };
  CHECK(max_fd_error(g, init, rng) < kFdTol);

  Tape t;
  Var p = t.leaf(init["p"], true);
  Var q = t.leaf(init["q"], true);
  t.backward(mse(p, q));
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(t.grad(p)[i] == doctest::Approx(-t.grad(q)[i]).epsilon(1e-12));
}

TEST_CASE("small convolutional vae end to end gradients") {
  // conv, relu, pool, dense heads, reparameterized sample, dense decode,
  // sigmoid, then bce plus weighted kl. Two-sample batch.
  Rng rng(111);
  ParamMap init;
  init["x"] = Tensor({2, 1, 6, 6});
  for (std::size_t i = 0; i < init["x"].numel(); ++i)
    init["x"][i] = rng.uniform(0.05, 0.95);
  init["k"] = random_tensor({2, 1, 3, 3}, rng, 0.4);
  init["kb"] = random_tensor({2}, rng, 0.1);
  init["wm"] = random_tensor({18, 4}, rng, 0.3);
  init["bm"] = random_tensor({4}, rng, 0.1);
  init["wv"] = random_tensor({18, 4}, rng, 0.3);
  init["bv"] = random_tensor({4}, rng, 0.1);
  init["wd"] = random_tensor({4, 36}, rng, 0.3);
  init["bd"] = random_tensor({36}, rng, 0.1);
  const Tensor eps = random_tensor({2, 4}, rng);
  GraphFn g = [eps](Tape& tp, const VarMap& v) {
    Var h = maxpool2x2(relu(conv2d_same(v.at("x"), v.at("k"), v.at("kb"))));
    Var flat = reshape(h, {2, 18});
    Var mu = dense(flat, v.at("wm"), v.at("bm"));
    Var lv = dense(flat, v.at("wv"), v.at("bv"));
    Var z = reparameterize(mu, lv, eps);
    Var out = sigmoid(dense(z, v.at("wd"), v.at("bd")));
    Var recon = bce(out, reshape(v.at("x"), {2, 36}));
    return add(scale(recon, 36.0), scale(kl_diag_gaussian(mu, lv), 0.5));
  };
  CHECK(max_fd_error(g, init, rng, 8) < kFdTol);
}

TEST_CASE("identical pred and target give zero gradients") {
  Rng rng(121);
  Tensor v = random_tensor({5}, rng);
  Tape t;
  Var p = t.leaf(v, true);
  Var q = t.leaf(v);
  t.backward(mse(p, q));
  for (std::size_t i = 0; i < 5; ++i) CHECK(t.grad(p)[i] == 0.0);
}

TEST_CASE("backward argument validation") {
  Tape t;
  Var x = t.leaf(Tensor({2}, {1, 2}), true);
  Var y = relu(x);
  // Non-scalar target.
  CHECK_THROWS_AS(t.backward(y), Error);

  Tape t2;
  Var a = t2.leaf(Tensor({1}, {1.0}));
  Var b = t2.leaf(Tensor({1}, {2.0}));
  Var loss = mse(a, b);
  // Nothing upstream requires a gradient.
  CHECK_THROWS_AS(t2.backward(loss), Error);
}

TEST_CASE("grad access before backward is an error") {
  Tape t;
  Var x = t.leaf(Tensor({1}, {1.0}), true);
  CHECK_THROWS_AS(t.grad(x), Error);
}

TEST_CASE("untracked leaves receive no gradient") {
  Tape t;
  Var p = t.leaf(Tensor({2}, {1, 2}), true);
  Var q = t.leaf(Tensor({2}, {5, 7}));
  t.backward(mse(p, q));
  CHECK(t.grad(p)[0] != 0.0);
  // q is a plain constant: its gradient reads back as zeros even though
  // d(loss)/dq would be nonzero if it were tracked.
  CHECK(t.grad(q)[0] == 0.0);
  CHECK(t.grad(q)[1] == 0.0);
}

TEST_CASE("ops reject vars from different tapes") {
  Tape t1;
  Tape t2;
  Var a = t1.leaf(Tensor({2}, {1, 2}));
  Var b = t2.leaf(Tensor({2}, {3, 4}));
  CHECK_THROWS_AS(add(a, b), Error);
}
