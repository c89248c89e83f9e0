// Copyright 2026 The sitsmon authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cblas.h>

#include <cmath>
#include <string>
#include <vector>

#include "core/rng.hpp"
#include "core/tensor.hpp"

// Minimal CPU training stack: conv / pool / upsample layers with explicit
// forward and backward passes, im2col + BLAS GEMM in the convolutions.
// Templated on the scalar type; float for training, double for the
// finite-difference gradient checks.

namespace sitsmon::nn {

inline void gemm(bool ta, bool tb, int m, int n, int k, float alpha,
                 const float* a, int lda, const float* b, int ldb, float beta,
                 float* c, int ldc) {
  cblas_sgemm(CblasRowMajor, ta ? CblasTrans : CblasNoTrans,
              tb ? CblasTrans : CblasNoTrans, m, n, k, alpha, a, lda, b, ldb,
              beta, c, ldc);
}

inline void gemm(bool ta, bool tb, int m, int n, int k, double alpha,
                 const double* a, int lda, const double* b, int ldb,
                 double beta, double* c, int ldc) {
  cblas_dgemm(CblasRowMajor, ta ? CblasTrans : CblasNoTrans,
              tb ? CblasTrans : CblasNoTrans, m, n, k, alpha, a, lda, b, ldb,
              beta, c, ldc);
}

template <typename T>
struct Param {
  std::string name;
  TensorT<T> value;
  TensorT<T> grad;
  TensorT<T> adam_m;
  TensorT<T> adam_v;

  Param() = default;
  Param(std::string n, std::vector<int> shape)
      : name(std::move(n)),
        value(shape),
        grad(shape),
        adam_m(shape),
        adam_v(shape) {}
};

// col: (C*k*k) x (H*W), stride 1.
template <typename T>
void im2col(const T* x, int c_in, int h, int w, int k, int pad, T* col) {
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  std::size_t row = 0;
  for (int c = 0; c < c_in; ++c) {
    const T* xc = x + static_cast<std::size_t>(c) * plane;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx, ++row) {
        T* dst = col + row * plane;
        for (int y = 0; y < h; ++y) {
          const int sy = y + ky - pad;
          T* drow = dst + static_cast<std::size_t>(y) * w;
          if (sy < 0 || sy >= h) {
            std::fill(drow, drow + w, T(0));
            continue;
          }
          const T* srow = xc + static_cast<std::size_t>(sy) * w;
          for (int xx = 0; xx < w; ++xx) {
            const int sx = xx + kx - pad;
            drow[xx] = (sx >= 0 && sx < w) ? srow[sx] : T(0);
          }
        }
      }
    }
  }
}

template <typename T>
void col2im_add(const T* col, int c_in, int h, int w, int k, int pad, T* x) {
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  std::size_t row = 0;
  for (int c = 0; c < c_in; ++c) {
    T* xc = x + static_cast<std::size_t>(c) * plane;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx, ++row) {
        const T* src = col + row * plane;
        for (int y = 0; y < h; ++y) {
          const int sy = y + ky - pad;
          if (sy < 0 || sy >= h) continue;
          const T* srow = src + static_cast<std::size_t>(y) * w;
          T* xrow = xc + static_cast<std::size_t>(sy) * w;
          for (int xx = 0; xx < w; ++xx) {
            const int sx = xx + kx - pad;
            if (sx >= 0 && sx < w) xrow[sx] += srow[xx];
          }
        }
      }
    }
  }
}

// Stride-1 convolution with "same" padding for odd kernels.
template <typename T>
class Conv2d {
 public:
  Conv2d(std::string name, int in_c, int out_c, int k)
      : in_c_(in_c),
        out_c_(out_c),
        k_(k),
        pad_((k - 1) / 2),
        weight_(name + ".weight", {out_c, in_c * k * k}),
        bias_(name + ".bias", {out_c}) {}

  // Matches the common deep-learning default: U(-1/sqrt(fan_in),
  // 1/sqrt(fan_in)) for both weights and biases, fan_in = k*k*in_c.
  void init(Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(k_) * k_ * in_c_);
    for (std::size_t i = 0; i < weight_.value.size(); ++i)
      weight_.value[i] = static_cast<T>(rng.uniform(-bound, bound));
    for (std::size_t i = 0; i < bias_.value.size(); ++i)
      bias_.value[i] = static_cast<T>(rng.uniform(-bound, bound));
  }

  TensorT<T> forward(const TensorT<T>& x) {
    input_ = x;
    const int n = x.dim(0), h = x.dim(2), w = x.dim(3);
    const std::size_t plane = static_cast<std::size_t>(h) * w;
    const int kk = in_c_ * k_ * k_;
    TensorT<T> y({n, out_c_, h, w});
    std::vector<T> col(static_cast<std::size_t>(kk) * plane);
    for (int i = 0; i < n; ++i) {
      const T* xi = x.data() + static_cast<std::size_t>(i) * in_c_ * plane;
      T* yi = y.data() + static_cast<std::size_t>(i) * out_c_ * plane;
      im2col(xi, in_c_, h, w, k_, pad_, col.data());
      gemm(false, false, out_c_, static_cast<int>(plane), kk, T(1),
           weight_.value.data(), kk, col.data(), static_cast<int>(plane), T(0),
           yi, static_cast<int>(plane));
      for (int c = 0; c < out_c_; ++c) {
        T* yc = yi + static_cast<std::size_t>(c) * plane;
        const T b = bias_.value[static_cast<std::size_t>(c)];
        for (std::size_t p = 0; p < plane; ++p) yc[p] += b;
      }
    }
    return y;
  }

  // Accumulates parameter gradients; returns gradient w.r.t. the input
  // unless `need_dx` is false (saves work on the first layer).
  TensorT<T> backward(const TensorT<T>& dy, bool need_dx = true) {
    const int n = input_.dim(0), h = input_.dim(2), w = input_.dim(3);
    const std::size_t plane = static_cast<std::size_t>(h) * w;
    const int kk = in_c_ * k_ * k_;
    TensorT<T> dx;
    if (need_dx) dx = TensorT<T>({n, in_c_, h, w});

    std::vector<T> col(static_cast<std::size_t>(kk) * plane);
    std::vector<T> dcol(need_dx ? col.size() : 0);
    for (int i = 0; i < n; ++i) {
      const T* xi = input_.data() + static_cast<std::size_t>(i) * in_c_ * plane;
      const T* dyi = dy.data() + static_cast<std::size_t>(i) * out_c_ * plane;
      im2col(xi, in_c_, h, w, k_, pad_, col.data());
      // dW += dY * col^T
      gemm(false, true, out_c_, kk, static_cast<int>(plane), T(1), dyi,
           static_cast<int>(plane), col.data(), static_cast<int>(plane), T(1),
           weight_.grad.data(), kk);
      for (int c = 0; c < out_c_; ++c) {
        const T* dyc = dyi + static_cast<std::size_t>(c) * plane;
        T acc = T(0);
        for (std::size_t p = 0; p < plane; ++p) acc += dyc[p];
        bias_.grad[static_cast<std::size_t>(c)] += acc;
      }
      if (need_dx) {
        // dcol = W^T * dY
        gemm(true, false, kk, static_cast<int>(plane), out_c_, T(1),
             weight_.value.data(), kk, dyi, static_cast<int>(plane), T(0),
             dcol.data(), static_cast<int>(plane));
        col2im_add(dcol.data(), in_c_, h, w, k_, pad_,
                   dx.data() + static_cast<std::size_t>(i) * in_c_ * plane);
      }
    }
    return dx;
  }

  Param<T>& weight() { return weight_; }
  Param<T>& bias() { return bias_; }
  int in_channels() const { return in_c_; }
  int out_channels() const { return out_c_; }
  int kernel() const { return k_; }

 private:
  int in_c_, out_c_, k_, pad_;
  Param<T> weight_;
  Param<T> bias_;
  TensorT<T> input_;
};

template <typename T>
class Gelu {
 public:
  TensorT<T> forward(const TensorT<T>& x) {
    input_ = x;
    TensorT<T> y(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double v = static_cast<double>(x[i]);
      y[i] = static_cast<T>(0.5 * v * (1.0 + std::erf(v * M_SQRT1_2)));
    }
    return y;
  }

  TensorT<T> backward(const TensorT<T>& dy) {
    TensorT<T> dx(dy.shape());
    constexpr double kInvSqrt2Pi = 0.3989422804014327;
    for (std::size_t i = 0; i < dy.size(); ++i) {
      const double v = static_cast<double>(input_[i]);
      const double cdf = 0.5 * (1.0 + std::erf(v * M_SQRT1_2));
      const double pdf = kInvSqrt2Pi * std::exp(-0.5 * v * v);
      dx[i] = static_cast<T>(static_cast<double>(dy[i]) * (cdf + v * pdf));
    }
    return dx;
  }

 private:
  TensorT<T> input_;
};

// 2x2 max pooling, stride 2.
template <typename T>
class MaxPool2 {
 public:
  TensorT<T> forward(const TensorT<T>& x) {
    const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
    const int oh = h / 2, ow = w / 2;
    in_shape_ = x.shape();
    TensorT<T> y({n, c, oh, ow});
    argmax_.assign(y.size(), 0);
    std::size_t o = 0;
    for (int i = 0; i < n; ++i)
      for (int cc = 0; cc < c; ++cc) {
        const T* plane = x.data() + (static_cast<std::size_t>(i) * c + cc) *
                                        static_cast<std::size_t>(h) * w;
        for (int y0 = 0; y0 < oh; ++y0)
          for (int x0 = 0; x0 < ow; ++x0, ++o) {
            std::size_t best = static_cast<std::size_t>(2 * y0) * w + 2 * x0;
            T bv = plane[best];
            const std::size_t cands[3] = {best + 1, best + w, best + w + 1};
            for (std::size_t cand : cands) {
              if (plane[cand] > bv) {
                bv = plane[cand];
                best = cand;
              }
            }
            y[o] = bv;
            argmax_[o] = best;
          }
      }
    return y;
  }

  TensorT<T> backward(const TensorT<T>& dy) {
    const int n = in_shape_[0], c = in_shape_[1], h = in_shape_[2],
              w = in_shape_[3];
    TensorT<T> dx(in_shape_);
    std::size_t o = 0;
    for (int i = 0; i < n; ++i)
      for (int cc = 0; cc < c; ++cc) {
        T* plane = dx.data() + (static_cast<std::size_t>(i) * c + cc) *
                                   static_cast<std::size_t>(h) * w;
        const std::size_t count =
            static_cast<std::size_t>(h / 2) * static_cast<std::size_t>(w / 2);
        for (std::size_t p = 0; p < count; ++p, ++o) plane[argmax_[o]] += dy[o];
      }
    return dx;
  }

 private:
  std::vector<int> in_shape_;
  std::vector<std::size_t> argmax_;
};

// Bilinear 2x upsampling, half-pixel centers (align_corners = false).
template <typename T>
class Upsample2 {
 public:
  TensorT<T> forward(const TensorT<T>& x) {
    in_shape_ = x.shape();
    const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
    const int oh = h * 2, ow = w * 2;
    build_axis(h, iy0_, iy1_, fy_);
    build_axis(w, ix0_, ix1_, fx_);
    TensorT<T> y({n, c, oh, ow});
    for (int i = 0; i < n; ++i)
      for (int cc = 0; cc < c; ++cc) {
        const T* src = x.data() + (static_cast<std::size_t>(i) * c + cc) *
                                      static_cast<std::size_t>(h) * w;
        T* dst = y.data() + (static_cast<std::size_t>(i) * c + cc) *
                                static_cast<std::size_t>(oh) * ow;
        for (int yy = 0; yy < oh; ++yy) {
          const int y0 = iy0_[yy], y1 = iy1_[yy];
          const T fy = fy_[yy];
          for (int xx = 0; xx < ow; ++xx) {
            const int x0 = ix0_[xx], x1 = ix1_[xx];
            const T fx = fx_[xx];
            const T v00 = src[static_cast<std::size_t>(y0) * w + x0];
            const T v01 = src[static_cast<std::size_t>(y0) * w + x1];
            const T v10 = src[static_cast<std::size_t>(y1) * w + x0];
            const T v11 = src[static_cast<std::size_t>(y1) * w + x1];
            dst[static_cast<std::size_t>(yy) * ow + xx] =
                (T(1) - fy) * ((T(1) - fx) * v00 + fx * v01) +
                fy * ((T(1) - fx) * v10 + fx * v11);
          }
        }
      }
    return y;
  }

  TensorT<T> backward(const TensorT<T>& dy) {
    const int n = in_shape_[0], c = in_shape_[1], h = in_shape_[2],
              w = in_shape_[3];
    const int oh = h * 2, ow = w * 2;
    TensorT<T> dx(in_shape_);
    for (int i = 0; i < n; ++i)
      for (int cc = 0; cc < c; ++cc) {
        T* dst = dx.data() + (static_cast<std::size_t>(i) * c + cc) *
                                 static_cast<std::size_t>(h) * w;
        const T* src = dy.data() + (static_cast<std::size_t>(i) * c + cc) *
                                       static_cast<std::size_t>(oh) * ow;
        for (int yy = 0; yy < oh; ++yy) {
          const int y0 = iy0_[yy], y1 = iy1_[yy];
          const T fy = fy_[yy];
          for (int xx = 0; xx < ow; ++xx) {
            const int x0 = ix0_[xx], x1 = ix1_[xx];
            const T fx = fx_[xx];
            const T g = src[static_cast<std::size_t>(yy) * ow + xx];
            dst[static_cast<std::size_t>(y0) * w + x0] += (T(1) - fy) * (T(1) - fx) * g;
            dst[static_cast<std::size_t>(y0) * w + x1] += (T(1) - fy) * fx * g;
            dst[static_cast<std::size_t>(y1) * w + x0] += fy * (T(1) - fx) * g;
            dst[static_cast<std::size_t>(y1) * w + x1] += fy * fx * g;
          }
        }
      }
    return dx;
  }

 private:
  void build_axis(int src_len, std::vector<int>& i0, std::vector<int>& i1,
                  std::vector<T>& f) {
    const int dst_len = src_len * 2;
    i0.resize(dst_len);
    i1.resize(dst_len);
    f.resize(dst_len);
    for (int d = 0; d < dst_len; ++d) {
      double s = (static_cast<double>(d) + 0.5) * 0.5 - 0.5;
      if (s < 0.0) s = 0.0;
      const int lo = static_cast<int>(s);
      i0[d] = lo;
      i1[d] = std::min(lo + 1, src_len - 1);
      f[d] = static_cast<T>(s - lo);
    }
  }

  std::vector<int> in_shape_;
  std::vector<int> iy0_, iy1_, ix0_, ix1_;
  std::vector<T> fy_, fx_;
};

// Channel concatenation of NxCxHxW blocks.
template <typename T>
TensorT<T> concat_channels(const std::vector<const TensorT<T>*>& parts) {
  const int n = parts[0]->dim(0), h = parts[0]->dim(2), w = parts[0]->dim(3);
  int c_total = 0;
  for (const auto* p : parts) c_total += p->dim(1);
  TensorT<T> out({n, c_total, h, w});
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  for (int i = 0; i < n; ++i) {
    std::size_t off = 0;
    for (const auto* p : parts) {
      const std::size_t block = static_cast<std::size_t>(p->dim(1)) * plane;
      std::copy_n(p->data() + static_cast<std::size_t>(i) * block, block,
                  out.data() + static_cast<std::size_t>(i) * c_total * plane + off);
      off += block;
    }
  }
  return out;
}

// Slices channels [c0, c0+len) out of an NxCxHxW tensor.
template <typename T>
TensorT<T> slice_channels(const TensorT<T>& x, int c0, int len) {
  const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  TensorT<T> out({n, len, h, w});
  for (int i = 0; i < n; ++i)
    std::copy_n(x.data() + (static_cast<std::size_t>(i) * c + c0) * plane,
                static_cast<std::size_t>(len) * plane,
                out.data() + static_cast<std::size_t>(i) * len * plane);
  return out;
}

}  // namespace sitsmon::nn
