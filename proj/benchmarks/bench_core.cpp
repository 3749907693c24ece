// Microbenchmarks for the numeric kernels the training loop leans on.

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

#include <benchmark/benchmark.h>

#include "cmem/gemm.hpp"
#include "cmem/graph.hpp"
#include "cmem/mfcc.hpp"
#include "cmem/psnr.hpp"
#include "cmem/rng.hpp"
#include "cmem/speech.hpp"
#include "cmem/tensor.hpp"

namespace {

using namespace cmem;

Tensor random_tensor(const Shape& shape, std::uint64_t seed) {
  Rng rng(seed);
  Tensor t(shape);
  for (std::size_t i = 0; i < t.numel(); ++i)
    t.data()[i] = rng.uniform(-1.0, 1.0);
  return t;
}

void BM_Gemm(benchmark::State& state) {
  const auto n = (std::size_t)state.range(0);
  const Tensor a = random_tensor({n, n}, 1);
  const Tensor b = random_tensor({n, n}, 2);
  Tensor c({n, n});
  for (auto _ : state) {
    gemm(a.data(), b.data(), c.data(), n, n, n);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n * n);
}
BENCHMARK(BM_Gemm)->Arg(64)->Arg(128)->Arg(256);

// One conv layer forward+backward at the training geometry.
void BM_ConvGrad(benchmark::State& state) {
  const auto batch = (std::size_t)state.range(0);
  const Tensor x = random_tensor({batch, 1, 28, 56}, 3);
  const Tensor k = random_tensor({8, 1, 5, 5}, 4);
  const Tensor b = random_tensor({8}, 5);
  const Tensor target({batch, 8, 28, 56});
  for (auto _ : state) {
    Tape tape;
    Var vx = tape.leaf(x);
    Var vk = tape.leaf(k, true);
    Var vb = tape.leaf(b, true);
    Var loss = mse(relu(conv2d_same(vx, vk, vb)), tape.leaf(target));
    tape.backward(loss);
    benchmark::DoNotOptimize(tape.grad(vk).data());
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_ConvGrad)->Arg(8)->Arg(32);

void BM_Mfcc(benchmark::State& state) {
  const WavClip clip = synth_token_clip("seven");
  for (auto _ : state) {
    Tensor coeffs = mfcc(clip);
    benchmark::DoNotOptimize(coeffs.data());
  }
}
BENCHMARK(BM_Mfcc);

void BM_PsnrNearest(benchmark::State& state) {
  const auto n = (std::size_t)state.range(0);
  Tensor candidates = random_tensor({n, 1, 28, 56}, 6);
  for (std::size_t i = 0; i < candidates.numel(); ++i)
    candidates.data()[i] = 0.5 * (candidates.data()[i] + 1.0);
  const Tensor probe = random_tensor({1, 28, 56}, 7);
  for (auto _ : state) {
    NearestPsnr best = psnr_nearest(probe, candidates);
    benchmark::DoNotOptimize(best);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_PsnrNearest)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
