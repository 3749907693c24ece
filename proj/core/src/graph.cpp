// cmem/graph.cpp

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

#include "cmem/graph.hpp"

#include <cmath>
#include <cstdint>
#include <utility>

#include "cmem/common.hpp"
#include "cmem/gemm.hpp"

namespace cmem {

const Tensor& Var::value() const {
  CMEM_CHECK(tape != nullptr) << "Var is not bound to a tape";
  return tape->value(*this);
}

const Shape& Var::shape() const { return value().shape(); }

Var Tape::leaf(Tensor value, bool requires_grad) {
  return emit(std::move(value), requires_grad, nullptr);
}

Var Tape::emit(Tensor value, bool requires_grad,
               std::function<void()> backprop) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  if (requires_grad) n.backprop = std::move(backprop);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1, this};
}

Tape::Node& Tape::node(Var v) {
  CMEM_CHECK(v.tape == this && v.idx >= 0 &&
             v.idx < static_cast<int>(nodes_.size()))
      << "Var does not belong to this tape";
  return nodes_[v.idx];
}

const Tape::Node& Tape::node(Var v) const {
  return const_cast<Tape*>(this)->node(v);
}

Tensor& Tape::grad_buf(int idx) {
  Node& n = nodes_[idx];
  if (n.grad.empty()) n.grad = Tensor(n.value.shape());
  return n.grad;
}

const Tensor& Tape::value(Var v) const { return node(v).value; }

const Tensor& Tape::grad(Var v) const {
  CMEM_CHECK(ran_backward_) << "gradients requested before backward() ran";
  const Node& n = node(v);
  if (n.grad.empty())
    const_cast<Tape*>(this)->grad_buf(v.idx);  // no flow: zeros
  return node(v).grad;
}

void Tape::backward(Var loss) {
  Node& ln = node(loss);
  CMEM_CHECK(ln.value.numel() == 1)
      << "backward() target must be scalar, got " << ln.value.shape_str();
  CMEM_CHECK(ln.requires_grad)
      << "backward() target does not depend on any trainable leaf";
  grad_buf(loss.idx)[0] = 1.0;
  for (int i = loss.idx; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.backprop && !n.grad.empty()) n.backprop();
  }
  ran_backward_ = true;
}

namespace {

void check_same_tape(Var a, Var b) {
  CMEM_CHECK(a.tape != nullptr && a.tape == b.tape)
      << "operands live on different tapes";
}

// cols[h*w, c*kh*kw] for stride-1 "same" zero padding.
void im2col(const Scalar* x, std::size_t c, std::size_t h, std::size_t w,
            std::size_t kh, std::size_t kw, Scalar* cols) {
  const std::size_t ph = kh / 2, pw = kw / 2;
  const std::size_t ckk = c * kh * kw;
  for (std::size_t oh = 0; oh < h; ++oh) {
    for (std::size_t ow = 0; ow < w; ++ow) {
      Scalar* row = cols + (oh * w + ow) * ckk;
      for (std::size_t ci = 0; ci < c; ++ci) {
        const Scalar* plane = x + ci * h * w;
        for (std::size_t ki = 0; ki < kh; ++ki) {
          const std::ptrdiff_t ih = static_cast<std::ptrdiff_t>(oh + ki) -
                                    static_cast<std::ptrdiff_t>(ph);
          for (std::size_t kj = 0; kj < kw; ++kj) {
            const std::ptrdiff_t iw = static_cast<std::ptrdiff_t>(ow + kj) -
                                      static_cast<std::ptrdiff_t>(pw);
            Scalar v = 0.0;
            if (ih >= 0 && ih < static_cast<std::ptrdiff_t>(h) && iw >= 0 &&
                iw < static_cast<std::ptrdiff_t>(w))
              v = plane[ih * w + iw];
            row[(ci * kh + ki) * kw + kj] = v;
          }
        }
      }
    }
  }
}

// Scatter-add of an im2col-shaped gradient back onto one input sample.
void col2im_acc(const Scalar* cols, std::size_t c, std::size_t h,
                std::size_t w, std::size_t kh, std::size_t kw, Scalar* dx) {
  const std::size_t ph = kh / 2, pw = kw / 2;
  const std::size_t ckk = c * kh * kw;
  for (std::size_t oh = 0; oh < h; ++oh) {
    for (std::size_t ow = 0; ow < w; ++ow) {
      const Scalar* row = cols + (oh * w + ow) * ckk;
      for (std::size_t ci = 0; ci < c; ++ci) {
        Scalar* plane = dx + ci * h * w;
        for (std::size_t ki = 0; ki < kh; ++ki) {
          const std::ptrdiff_t ih = static_cast<std::ptrdiff_t>(oh + ki) -
                                    static_cast<std::ptrdiff_t>(ph);
          if (ih < 0 || ih >= static_cast<std::ptrdiff_t>(h)) continue;
          for (std::size_t kj = 0; kj < kw; ++kj) {
            const std::ptrdiff_t iw = static_cast<std::ptrdiff_t>(ow + kj) -
                                      static_cast<std::ptrdiff_t>(pw);
            if (iw < 0 || iw >= static_cast<std::ptrdiff_t>(w)) continue;
            plane[ih * w + iw] += row[(ci * kh + ki) * kw + kj];
          }
        }
      }
    }
  }
}

Scalar stable_sigmoid(Scalar v) {
  if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
  const Scalar e = std::exp(v);
  return e / (1.0 + e);
}

}  // namespace

Var dense(Var xv, Var wv, Var bv) {
  check_same_tape(xv, wv);
  check_same_tape(xv, bv);
  Tape& t = *xv.tape;
  const Tensor& x = t.value(xv);
  const Tensor& w = t.value(wv);
  const Tensor& b = t.value(bv);
  CMEM_CHECK(x.rank() == 2 && w.rank() == 2 && x.dim(1) == w.dim(0))
      << "dense: input " << x.shape_str() << " does not match weight "
      << w.shape_str();
  CMEM_CHECK(b.rank() == 1 && b.dim(0) == w.dim(1))
      << "dense: bias " << b.shape_str() << " does not match weight "
      << w.shape_str();
  const std::size_t n = x.dim(0), in = x.dim(1), out = w.dim(1);

  Tensor y({n, out});
  gemm(x.data(), w.data(), y.data(), n, in, out);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < out; ++j) y[i * out + j] += b[j];

  const bool rg = t.node(xv).requires_grad || t.node(wv).requires_grad ||
                  t.node(bv).requires_grad;
  Tape* tp = &t;
  const int self = static_cast<int>(t.size());
  const int xi = xv.idx, wi = wv.idx, bi = bv.idx;
  return t.emit(std::move(y), rg, [tp, self, xi, wi, bi, n, in, out]() {
    Tape& t = *tp;
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& x = t.nodes_[xi].value;
    const Tensor& w = t.nodes_[wi].value;
    if (t.nodes_[xi].requires_grad) {
      std::vector<Scalar> wt(in * out);
      transpose(w.data(), wt.data(), in, out);
      gemm(g.data(), wt.data(), t.grad_buf(xi).data(), n, out, in, true);
    }
    if (t.nodes_[wi].requires_grad) {
      std::vector<Scalar> xt(n * in);
      transpose(x.data(), xt.data(), n, in);
      gemm(xt.data(), g.data(), t.grad_buf(wi).data(), in, n, out, true);
    }
    if (t.nodes_[bi].requires_grad) {
      Tensor& db = t.grad_buf(bi);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < out; ++j) db[j] += g[i * out + j];
    }
  });
}

Var conv2d_same(Var xv, Var kv, Var bv) {
  check_same_tape(xv, kv);
  check_same_tape(xv, bv);
  Tape& t = *xv.tape;
  const Tensor& x = t.value(xv);
  const Tensor& k = t.value(kv);
  const Tensor& b = t.value(bv);
  CMEM_CHECK(x.rank() == 4) << "conv2d: input must be [n, c, h, w], got "
                            << x.shape_str();
  CMEM_CHECK(k.rank() == 4 && k.dim(1) == x.dim(1))
      << "conv2d: kernel " << k.shape_str() << " does not match input "
      << x.shape_str();
  CMEM_CHECK(k.dim(2) == k.dim(3) && k.dim(2) % 2 == 1)
      << "conv2d: kernel must be square with odd size, got " << k.shape_str();
  CMEM_CHECK(b.rank() == 1 && b.dim(0) == k.dim(0))
      << "conv2d: bias " << b.shape_str() << " does not match kernel "
      << k.shape_str();

  const std::size_t n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  const std::size_t f = k.dim(0), ks = k.dim(2);
  const std::size_t hw = h * w, ckk = c * ks * ks;

  Tensor y({n, f, h, w});
  std::vector<Scalar> cols(hw * ckk), kt(ckk * f), out_s(hw * f);
  transpose(k.data(), kt.data(), f, ckk);  // [f, ckk] -> [ckk, f]
  for (std::size_t s = 0; s < n; ++s) {
    im2col(x.data() + s * c * hw, c, h, w, ks, ks, cols.data());
    gemm(cols.data(), kt.data(), out_s.data(), hw, ckk, f);
    Scalar* ys = y.data() + s * f * hw;
    for (std::size_t p = 0; p < hw; ++p)
      for (std::size_t fi = 0; fi < f; ++fi)
        ys[fi * hw + p] = out_s[p * f + fi] + b[fi];
  }

  const bool rg = t.node(xv).requires_grad || t.node(kv).requires_grad ||
                  t.node(bv).requires_grad;
  Tape* tp = &t;
  const int self = static_cast<int>(t.size());
  const int xi = xv.idx, ki = kv.idx, bi = bv.idx;
  return t.emit(
      std::move(y), rg, [tp, self, xi, ki, bi, n, c, h, w, f, ks]() {
        Tape& t = *tp;
        const Tensor& g = t.nodes_[self].grad;
        const Tensor& x = t.nodes_[xi].value;
        const Tensor& k = t.nodes_[ki].value;
        const std::size_t hw = h * w, ckk = c * ks * ks;
        const bool want_dx = t.nodes_[xi].requires_grad;
        const bool want_dk = t.nodes_[ki].requires_grad;
        const bool want_db = t.nodes_[bi].requires_grad;

        std::vector<Scalar> cols(hw * ckk), gout(hw * f), gout_t(f * hw),
            dcols(hw * ckk);
        for (std::size_t s = 0; s < n; ++s) {
          const Scalar* gs = g.data() + s * f * hw;
          for (std::size_t fi = 0; fi < f; ++fi)
            for (std::size_t p = 0; p < hw; ++p)
              gout[p * f + fi] = gs[fi * hw + p];

          if (want_dk || want_dx)
            im2col(x.data() + s * c * hw, c, h, w, ks, ks, cols.data());

          if (want_dk) {
            transpose(gout.data(), gout_t.data(), hw, f);  // [f, hw]
            gemm(gout_t.data(), cols.data(), t.grad_buf(ki).data(), f, hw,
                 ckk, true);
          }
          if (want_db) {
            Tensor& db = t.grad_buf(bi);
            for (std::size_t fi = 0; fi < f; ++fi) {
              Scalar acc = 0.0;
              for (std::size_t p = 0; p < hw; ++p) acc += gs[fi * hw + p];
              db[fi] += acc;
            }
          }
          if (want_dx) {
            gemm(gout.data(), k.data(), dcols.data(), hw, f, ckk);
            col2im_acc(dcols.data(), c, h, w, ks, ks,
                       t.grad_buf(xi).data() + s * c * hw);
          }
        }
      });
}

Var maxpool2x2(Var xv) {
  Tape& t = *xv.tape;
  const Tensor& x = t.value(xv);
  CMEM_CHECK(x.rank() == 4) << "maxpool2x2: input must be [n, c, h, w], got "
                            << x.shape_str();
  const std::size_t n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  CMEM_CHECK(h % 2 == 0 && w % 2 == 0)
      << "maxpool2x2: spatial dims must be even, got " << x.shape_str();
  const std::size_t oh = h / 2, ow = w / 2;

  Tensor y({n, c, oh, ow});
  std::vector<std::uint32_t> argmax(n * c * oh * ow);
  std::size_t o = 0;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t ci = 0; ci < c; ++ci) {
      const Scalar* plane = x.data() + (s * c + ci) * h * w;
      for (std::size_t i = 0; i < oh; ++i) {
        for (std::size_t j = 0; j < ow; ++j, ++o) {
          const std::size_t base = (2 * i) * w + 2 * j;
          // fixed scan order; ties resolve to the earliest index
          std::size_t best = base;
          Scalar bv = plane[base];
          const std::size_t cand[3] = {base + 1, base + w, base + w + 1};
          for (std::size_t q : cand) {
            if (plane[q] > bv) {
              bv = plane[q];
              best = q;
            }
          }
          y[o] = bv;
          argmax[o] = static_cast<std::uint32_t>((s * c + ci) * h * w + best);
        }
      }
    }
  }

  const bool rg = t.node(xv).requires_grad;
  Tape* tp = &t;
  const int self = static_cast<int>(t.size());
  const int xi = xv.idx;
  return t.emit(std::move(y), rg,
                [tp, self, xi, argmax = std::move(argmax)]() {
                  Tape& t = *tp;
                  const Tensor& g = t.nodes_[self].grad;
                  Tensor& dx = t.grad_buf(xi);
                  for (std::size_t o = 0; o < argmax.size(); ++o)
                    dx[argmax[o]] += g[o];
                });
}

Var upsample2x2(Var xv) {
  Tape& t = *xv.tape;
  const Tensor& x = t.value(xv);
  CMEM_CHECK(x.rank() == 4) << "upsample2x2: input must be [n, c, h, w], got "
                            << x.shape_str();
  const std::size_t n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  const std::size_t oh = 2 * h, ow = 2 * w;

  Tensor y({n, c, oh, ow});
  for (std::size_t sc = 0; sc < n * c; ++sc) {
    const Scalar* in = x.data() + sc * h * w;
    Scalar* out = y.data() + sc * oh * ow;
    for (std::size_t i = 0; i < oh; ++i)
      for (std::size_t j = 0; j < ow; ++j)
        out[i * ow + j] = in[(i / 2) * w + j / 2];
  }

  const bool rg = t.node(xv).requires_grad;
  Tape* tp = &t;
  const int self = static_cast<int>(t.size());
  const int xi = xv.idx;
  return t.emit(std::move(y), rg, [tp, self, xi, n, c, h, w]() {
    Tape& t = *tp;
    const Tensor& g = t.nodes_[self].grad;
    Tensor& dx = t.grad_buf(xi);
    const std::size_t oh = 2 * h, ow = 2 * w;
    for (std::size_t sc = 0; sc < n * c; ++sc) {
      const Scalar* go = g.data() + sc * oh * ow;
      Scalar* dxo = dx.data() + sc * h * w;
      for (std::size_t i = 0; i < oh; ++i)
        for (std::size_t j = 0; j < ow; ++j)
          dxo[(i / 2) * w + j / 2] += go[i * ow + j];
    }
  });
}

Var relu(Var xv) {
  Tape& t = *xv.tape;
  const Tensor& x = t.value(xv);
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.numel(); ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;

  const bool rg = t.node(xv).requires_grad;
  Tape* tp = &t;
  const int self = static_cast<int>(t.size());
  const int xi = xv.idx;
  return t.emit(std::move(y), rg, [tp, self, xi]() {
    Tape& t = *tp;
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& x = t.nodes_[xi].value;
    Tensor& dx = t.grad_buf(xi);
    for (std::size_t i = 0; i < g.numel(); ++i)
      if (x[i] > 0.0) dx[i] += g[i];
  });
}

Var sigmoid(Var xv) {
  Tape& t = *xv.tape;
  const Tensor& x = t.value(xv);
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.numel(); ++i) y[i] = stable_sigmoid(x[i]);

  const bool rg = t.node(xv).requires_grad;
  Tape* tp = &t;
  const int self = static_cast<int>(t.size());
  const int xi = xv.idx;
  return t.emit(std::move(y), rg, [tp, self, xi]() {
    Tape& t = *tp;
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& y = t.nodes_[self].value;
    Tensor& dx = t.grad_buf(xi);
    for (std::size_t i = 0; i < g.numel(); ++i)
      dx[i] += g[i] * y[i] * (1.0 - y[i]);
  });
}

Var reshape(Var xv, Shape shape) {
  Tape& t = *xv.tape;
  Tensor y = t.value(xv).reshaped(std::move(shape));

  const bool rg = t.node(xv).requires_grad;
  Tape* tp = &t;
  const int self = static_cast<int>(t.size());
  const int xi = xv.idx;
  return t.emit(std::move(y), rg, [tp, self, xi]() {
    Tape& t = *tp;
    const Tensor& g = t.nodes_[self].grad;
    Tensor& dx = t.grad_buf(xi);
    for (std::size_t i = 0; i < g.numel(); ++i) dx[i] += g[i];
  });
}

Var mse(Var pv, Var tv) {
  check_same_tape(pv, tv);
  Tape& t = *pv.tape;
  const Tensor& p = t.value(pv);
  const Tensor& y = t.value(tv);
  CMEM_CHECK(p.same_shape(y)) << "mse: shape mismatch " << p.shape_str()
                              << " vs " << y.shape_str();
  const std::size_t n = p.numel();
  Scalar acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Scalar d = p[i] - y[i];
    acc += d * d;
  }

  const bool rg = t.node(pv).requires_grad || t.node(tv).requires_grad;
  Tape* tp = &t;
  const int self = static_cast<int>(t.size());
  const int pi = pv.idx, ti = tv.idx;
  return t.emit(Tensor::scalar(acc / static_cast<Scalar>(n)), rg,
                [tp, self, pi, ti, n]() {
                  Tape& t = *tp;
                  const Scalar g = t.nodes_[self].grad[0];
                  const Tensor& p = t.nodes_[pi].value;
                  const Tensor& y = t.nodes_[ti].value;
                  const Scalar s = 2.0 * g / static_cast<Scalar>(n);
                  if (t.nodes_[pi].requires_grad) {
                    Tensor& dp = t.grad_buf(pi);
                    for (std::size_t i = 0; i < n; ++i)
                      dp[i] += s * (p[i] - y[i]);
                  }
                  if (t.nodes_[ti].requires_grad) {
                    Tensor& dy = t.grad_buf(ti);
                    for (std::size_t i = 0; i < n; ++i)
                      dy[i] -= s * (p[i] - y[i]);
                  }
                });
}

Var bce(Var pv, Var tv) {
  check_same_tape(pv, tv);
  Tape& t = *pv.tape;
  const Tensor& p = t.value(pv);
  const Tensor& y = t.value(tv);
  CMEM_CHECK(p.same_shape(y)) << "bce: shape mismatch " << p.shape_str()
                              << " vs " << y.shape_str();
  const std::size_t n = p.numel();
  Scalar acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    CMEM_CHECK(y[i] >= 0.0 && y[i] <= 1.0)
        << "bce: target value " << y[i] << " outside [0, 1]";
    const Scalar pc = std::clamp(p[i], kBceClamp, 1.0 - kBceClamp);
    acc -= y[i] * std::log(pc) + (1.0 - y[i]) * std::log(1.0 - pc);
  }

  const bool rg = t.node(pv).requires_grad || t.node(tv).requires_grad;
  Tape* tp = &t;
  const int self = static_cast<int>(t.size());
  const int pi = pv.idx, ti = tv.idx;
  return t.emit(
      Tensor::scalar(acc / static_cast<Scalar>(n)), rg,
      [tp, self, pi, ti, n]() {
        Tape& t = *tp;
        const Scalar g = t.nodes_[self].grad[0];
        const Tensor& p = t.nodes_[pi].value;
        const Tensor& y = t.nodes_[ti].value;
        const Scalar inv_n = 1.0 / static_cast<Scalar>(n);
        if (t.nodes_[pi].requires_grad) {
          Tensor& dp = t.grad_buf(pi);
          for (std::size_t i = 0; i < n; ++i) {
            // zero slope where the clamp is active
            if (p[i] <= kBceClamp || p[i] >= 1.0 - kBceClamp) continue;
            dp[i] += g * inv_n * (p[i] - y[i]) / (p[i] * (1.0 - p[i]));
          }
        }
        if (t.nodes_[ti].requires_grad) {
          Tensor& dy = t.grad_buf(ti);
          for (std::size_t i = 0; i < n; ++i) {
            const Scalar pc = std::clamp(p[i], kBceClamp, 1.0 - kBceClamp);
            dy[i] += g * inv_n * (std::log(1.0 - pc) - std::log(pc));
          }
        }
      });
}

Var kl_diag_gaussian(Var mv, Var lv) {
  check_same_tape(mv, lv);
  Tape& t = *mv.tape;
  const Tensor& mu = t.value(mv);
  const Tensor& logv = t.value(lv);
  CMEM_CHECK(mu.same_shape(logv))
      << "kl_diag_gaussian: shape mismatch " << mu.shape_str() << " vs "
      << logv.shape_str();
  const std::size_t n = mu.numel();
  Scalar acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    acc += -0.5 * (1.0 + logv[i] - mu[i] * mu[i] - std::exp(logv[i]));

  const bool rg = t.node(mv).requires_grad || t.node(lv).requires_grad;
  Tape* tp = &t;
  const int self = static_cast<int>(t.size());
  const int mi = mv.idx, li = lv.idx;
  return t.emit(Tensor::scalar(acc), rg, [tp, self, mi, li, n]() {
    Tape& t = *tp;
    const Scalar g = t.nodes_[self].grad[0];
    const Tensor& mu = t.nodes_[mi].value;
    const Tensor& logv = t.nodes_[li].value;
    if (t.nodes_[mi].requires_grad) {
      Tensor& dm = t.grad_buf(mi);
      for (std::size_t i = 0; i < n; ++i) dm[i] += g * mu[i];
    }
    if (t.nodes_[li].requires_grad) {
      Tensor& dl = t.grad_buf(li);
      for (std::size_t i = 0; i < n; ++i)
        dl[i] += g * 0.5 * (std::exp(logv[i]) - 1.0);
    }
  });
}

Var reparameterize(Var mv, Var lv, const Tensor& eps) {
  check_same_tape(mv, lv);
  Tape& t = *mv.tape;
  const Tensor& mu = t.value(mv);
  const Tensor& logv = t.value(lv);
  CMEM_CHECK(mu.same_shape(logv) && mu.same_shape(eps))
      << "reparameterize: shape mismatch mu " << mu.shape_str() << ", log_var "
      << logv.shape_str() << ", eps " << eps.shape_str();
  const std::size_t n = mu.numel();
  Tensor z(mu.shape());
  for (std::size_t i = 0; i < n; ++i)
    z[i] = mu[i] + std::exp(0.5 * logv[i]) * eps[i];

  const bool rg = t.node(mv).requires_grad || t.node(lv).requires_grad;
  Tape* tp = &t;
  const int self = static_cast<int>(t.size());
  const int mi = mv.idx, li = lv.idx;
  return t.emit(std::move(z), rg, [tp, self, mi, li, n, eps]() {
    Tape& t = *tp;
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& logv = t.nodes_[li].value;
    if (t.nodes_[mi].requires_grad) {
      Tensor& dm = t.grad_buf(mi);
      for (std::size_t i = 0; i < n; ++i) dm[i] += g[i];
    }
    if (t.nodes_[li].requires_grad) {
      Tensor& dl = t.grad_buf(li);
      for (std::size_t i = 0; i < n; ++i)
        dl[i] += g[i] * 0.5 * std::exp(0.5 * logv[i]) * eps[i];
    }
  });
}

Var add(Var av, Var bv) {
  check_same_tape(av, bv);
  Tape& t = *av.tape;
  const Tensor& a = t.value(av);
  const Tensor& b = t.value(bv);
  CMEM_CHECK(a.same_shape(b)) << "add: shape mismatch " << a.shape_str()
                              << " vs " << b.shape_str();
  Tensor y(a.shape());
  for (std::size_t i = 0; i < a.numel(); ++i) y[i] = a[i] + b[i];

  const bool rg = t.node(av).requires_grad || t.node(bv).requires_grad;
  Tape* tp = &t;
  const int self = static_cast<int>(t.size());
  const int ai = av.idx, bi = bv.idx;
  return t.emit(std::move(y), rg, [tp, self, ai, bi]() {
    Tape& t = *tp;
    const Tensor& g = t.nodes_[self].grad;
    for (int p : {ai, bi}) {
      if (!t.nodes_[p].requires_grad) continue;
      Tensor& d = t.grad_buf(p);
      for (std::size_t i = 0; i < g.numel(); ++i) d[i] += g[i];
    }
  });
}

Var scale(Var av, Scalar c) {
  Tape& t = *av.tape;
  const Tensor& a = t.value(av);
  Tensor y(a.shape());
  for (std::size_t i = 0; i < a.numel(); ++i) y[i] = c * a[i];

  const bool rg = t.node(av).requires_grad;
  Tape* tp = &t;
  const int self = static_cast<int>(t.size());
  const int ai = av.idx;
  return t.emit(std::move(y), rg, [tp, self, ai, c]() {
    Tape& t = *tp;
    const Tensor& g = t.nodes_[self].grad;
    Tensor& d = t.grad_buf(ai);
    for (std::size_t i = 0; i < g.numel(); ++i) d[i] += c * g[i];
  });
}

}  // namespace cmem
