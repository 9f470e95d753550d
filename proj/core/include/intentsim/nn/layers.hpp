#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "intentsim/nn/tensor.hpp"

namespace intentsim::nn {

template <class T>
struct Conv2d {
  int in_ch = 0, out_ch = 0, ksize = 1, stride = 1, pad = 0;
  bool has_bias = false;
  std::vector<T> weight, wgrad;  // [oc][ic][ky][kx]
  std::vector<T> bias, bgrad;
  Tensor<T> cached_input;

  Conv2d() = default;
  Conv2d(int in, int out, int k, int stride_, bool bias_)
      : in_ch(in), out_ch(out), ksize(k), stride(stride_), pad(k / 2), has_bias(bias_) {
    weight.assign(size_t(out) * in * k * k, T(0));
    wgrad.assign(weight.size(), T(0));
    if (has_bias) {
      bias.assign(size_t(out), T(0));
      bgrad.assign(size_t(out), T(0));
    }
  }

  void init(std::mt19937& rng) {
    // Fan-in scaled normal init; biases start at zero.
    double fan_in = double(in_ch) * ksize * ksize;
    std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / fan_in));
    for (T& v : weight) v = T(dist(rng));
  }

  int out_extent(int in_extent) const { return (in_extent + 2 * pad - ksize) / stride + 1; }

  const T& w_at(int oc, int ic, int ky, int kx) const {
    return weight[((size_t(oc) * in_ch + ic) * ksize + ky) * ksize + kx];
  }
  T& wg_at(int oc, int ic, int ky, int kx) {
    return wgrad[((size_t(oc) * in_ch + ic) * ksize + ky) * ksize + kx];
  }

  // Gathered patch matrix for one sample: row per output pixel, the
  // ic*k*k patch values contiguous within the row. Makes every hot loop a
  // long contiguous reduction or axpy.
  void im2col(const Tensor<T>& x, int ni, int oh, int ow, std::vector<T>& col) const {
    const int K = in_ch * ksize * ksize;
    col.assign(size_t(oh) * ow * K, T(0));
    for (int oy = 0; oy < oh; ++oy)
      for (int ox = 0; ox < ow; ++ox) {
        T* __restrict row = col.data() + (size_t(oy) * ow + ox) * K;
        for (int ic = 0; ic < in_ch; ++ic) {
          const T* plane = x.plane(ni, ic);
          for (int ky = 0; ky < ksize; ++ky) {
            int iy = oy * stride + ky - pad;
            if (iy < 0 || iy >= x.h) continue;
            const T* src = plane + size_t(iy) * x.w;
            T* dst = row + (size_t(ic) * ksize + ky) * ksize;
            for (int kx = 0; kx < ksize; ++kx) {
              int ix = ox * stride + kx - pad;
              if (ix >= 0 && ix < x.w) dst[kx] = src[ix];
            }
          }
        }
      }
  }

  // Fixed-order four-way unrolled dot product (deterministic and
  // vectorizable).
  static T dot(const T* __restrict a, const T* __restrict b, int n) {
    T s0 = T(0), s1 = T(0), s2 = T(0), s3 = T(0);
    int i = 0;
    for (; i + 4 <= n; i += 4) {
      s0 += a[i] * b[i];
      s1 += a[i + 1] * b[i + 1];
      s2 += a[i + 2] * b[i + 2];
      s3 += a[i + 3] * b[i + 3];
    }
    for (; i < n; ++i) s0 += a[i] * b[i];
    return (s0 + s1) + (s2 + s3);
  }

  static void axpy(T alpha, const T* __restrict x_, T* __restrict y_, int n) {
    for (int i = 0; i < n; ++i) y_[i] += alpha * x_[i];
  }

  Tensor<T> forward(const Tensor<T>& x) {
    if (x.c != in_ch) throw std::invalid_argument("conv2d: input channel mismatch");
    cached_input = x;
    const int oh = out_extent(x.h), ow = out_extent(x.w);
    const int K = in_ch * ksize * ksize;
    const int P = oh * ow;
    Tensor<T> y(x.n, out_ch, oh, ow);
    std::vector<T> col;
    for (int ni = 0; ni < x.n; ++ni) {
      im2col(x, ni, oh, ow, col);
      for (int oc = 0; oc < out_ch; ++oc) {
        const T* __restrict wrow = weight.data() + size_t(oc) * K;
        T* __restrict out = y.plane(ni, oc);
        T b = has_bias ? bias[size_t(oc)] : T(0);
        for (int p = 0; p < P; ++p) out[p] = b + dot(wrow, col.data() + size_t(p) * K, K);
      }
    }
    return y;
  }

  /// Accumulates weight/bias gradients and returns the input gradient.
  Tensor<T> backward(const Tensor<T>& gy) {
    const Tensor<T>& x = cached_input;
    const int oh = gy.h, ow = gy.w;
    const int K = in_ch * ksize * ksize;
    const int P = oh * ow;
    Tensor<T> gx(x.n, x.c, x.h, x.w);
    std::vector<T> col, dcol(size_t(P) * K);
    for (int ni = 0; ni < x.n; ++ni) {
      im2col(x, ni, oh, ow, col);
      std::fill(dcol.begin(), dcol.end(), T(0));
      for (int oc = 0; oc < out_ch; ++oc) {
        const T* __restrict g = gy.plane(ni, oc);
        T* __restrict wg = wgrad.data() + size_t(oc) * K;
        const T* __restrict wrow = weight.data() + size_t(oc) * K;
        T bsum = T(0);
        for (int p = 0; p < P; ++p) {
          T gv = g[p];
          bsum += gv;
          const T* crow = col.data() + size_t(p) * K;
          axpy(gv, crow, wg, K);                       // dW += gy * patch
          axpy(gv, wrow, dcol.data() + size_t(p) * K, K);  // dpatch += gy * W
        }
        if (has_bias) bgrad[size_t(oc)] += bsum;
      }
      // col2im: scatter patch gradients back into the input layout.
      for (int oy = 0; oy < oh; ++oy)
        for (int ox = 0; ox < ow; ++ox) {
          const T* row = dcol.data() + (size_t(oy) * ow + ox) * K;
          for (int ic = 0; ic < in_ch; ++ic) {
            T* plane = gx.plane(ni, ic);
            for (int ky = 0; ky < ksize; ++ky) {
              int iy = oy * stride + ky - pad;
              if (iy < 0 || iy >= x.h) continue;
              T* dst = plane + size_t(iy) * x.w;
              const T* srow = row + (size_t(ic) * ksize + ky) * ksize;
              for (int kx = 0; kx < ksize; ++kx) {
                int ix = ox * stride + kx - pad;
                if (ix >= 0 && ix < x.w) dst[ix] += srow[kx];
              }
            }
          }
        }
    }
    return gx;
  }

  void zero_grad() {
    std::fill(wgrad.begin(), wgrad.end(), T(0));
    std::fill(bgrad.begin(), bgrad.end(), T(0));
  }

  void collect_params(const std::string& prefix, std::vector<ParamView<T>>& out) {
    out.push_back({prefix + ".weight", &weight, &wgrad, true});
    if (has_bias) out.push_back({prefix + ".bias", &bias, &bgrad, true});
  }
};

template <class T>
struct BatchNorm2d {
  int channels = 0;
  T eps = T(1e-5);
  T momentum = T(0.1);
  std::vector<T> gamma, beta, ggrad, bgrad;
  std::vector<T> running_mean, running_var;

  // Training-mode caches for backward.
  Tensor<T> cached_xhat;
  std::vector<T> cached_mean, cached_inv_std;
  bool cached_train = false;

  BatchNorm2d() = default;
  explicit BatchNorm2d(int ch) : channels(ch) {
    gamma.assign(size_t(ch), T(1));
    beta.assign(size_t(ch), T(0));
    ggrad.assign(size_t(ch), T(0));
    bgrad.assign(size_t(ch), T(0));
    running_mean.assign(size_t(ch), T(0));
    running_var.assign(size_t(ch), T(1));
  }

  Tensor<T> forward(const Tensor<T>& x, bool train) {
    if (x.c != channels) throw std::invalid_argument("batchnorm: channel mismatch");
    Tensor<T> y(x.n, x.c, x.h, x.w);
    const size_t plane = size_t(x.h) * x.w;
    const size_t m = size_t(x.n) * plane;  // samples per channel
    cached_train = train;
    if (train) {
      cached_xhat = Tensor<T>(x.n, x.c, x.h, x.w);
      cached_mean.assign(size_t(channels), T(0));
      cached_inv_std.assign(size_t(channels), T(0));
    }
    for (int ci = 0; ci < channels; ++ci) {
      T mean, var;
      if (train) {
        double sum = 0.0, sq = 0.0;
        for (int ni = 0; ni < x.n; ++ni) {
          const T* p = x.plane(ni, ci);
          for (size_t i = 0; i < plane; ++i) {
            sum += double(p[i]);
            sq += double(p[i]) * double(p[i]);
          }
        }
        double mu = sum / double(m);
        double v = sq / double(m) - mu * mu;
        if (v < 0.0) v = 0.0;  // guard tiny negative from cancellation
        mean = T(mu);
        var = T(v);
        // Running statistics use the unbiased variance.
        T unbiased = m > 1 ? T(v * double(m) / double(m - 1)) : T(v);
        running_mean[size_t(ci)] =
            (T(1) - momentum) * running_mean[size_t(ci)] + momentum * mean;
        running_var[size_t(ci)] =
            (T(1) - momentum) * running_var[size_t(ci)] + momentum * unbiased;
        cached_mean[size_t(ci)] = mean;
        cached_inv_std[size_t(ci)] = T(1) / std::sqrt(var + eps);
      } else {
        mean = running_mean[size_t(ci)];
        var = running_var[size_t(ci)];
      }
      T inv_std = T(1) / std::sqrt(var + eps);
      T g = gamma[size_t(ci)], b = beta[size_t(ci)];
      for (int ni = 0; ni < x.n; ++ni) {
        const T* p = x.plane(ni, ci);
        T* q = y.plane(ni, ci);
        T* xh = train ? cached_xhat.plane(ni, ci) : nullptr;
        for (size_t i = 0; i < plane; ++i) {
          T xhat = (p[i] - mean) * inv_std;
          if (train) xh[i] = xhat;
          q[i] = g * xhat + b;
        }
      }
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& gy) {
    if (!cached_train) throw std::logic_error("batchnorm backward requires a training forward");
    const size_t plane = size_t(gy.h) * gy.w;
    const size_t m = size_t(gy.n) * plane;
    Tensor<T> gx(gy.n, gy.c, gy.h, gy.w);
    for (int ci = 0; ci < channels; ++ci) {
      double sum_gy = 0.0, sum_gy_xhat = 0.0;
      for (int ni = 0; ni < gy.n; ++ni) {
        const T* g = gy.plane(ni, ci);
        const T* xh = cached_xhat.plane(ni, ci);
        for (size_t i = 0; i < plane; ++i) {
          sum_gy += double(g[i]);
          sum_gy_xhat += double(g[i]) * double(xh[i]);
        }
      }
      ggrad[size_t(ci)] += T(sum_gy_xhat);
      bgrad[size_t(ci)] += T(sum_gy);
      T g = gamma[size_t(ci)];
      T inv_std = cached_inv_std[size_t(ci)];
      T k1 = g * inv_std;
      for (int ni = 0; ni < gy.n; ++ni) {
        const T* gp = gy.plane(ni, ci);
        const T* xh = cached_xhat.plane(ni, ci);
        T* gq = gx.plane(ni, ci);
        for (size_t i = 0; i < plane; ++i) {
          gq[i] = k1 * (gp[i] - T(sum_gy) / T(m) - xh[i] * T(sum_gy_xhat) / T(m));
        }
      }
    }
    return gx;
  }

  void zero_grad() {
    std::fill(ggrad.begin(), ggrad.end(), T(0));
    std::fill(bgrad.begin(), bgrad.end(), T(0));
  }

  void collect_params(const std::string& prefix, std::vector<ParamView<T>>& out) {
    out.push_back({prefix + ".gamma", &gamma, &ggrad, true});
    out.push_back({prefix + ".beta", &beta, &bgrad, true});
    out.push_back({prefix + ".running_mean", &running_mean, nullptr, false});
    out.push_back({prefix + ".running_var", &running_var, nullptr, false});
  }
};

template <class T>
struct Relu {
  Tensor<T> cached_input;

  Tensor<T> forward(const Tensor<T>& x) {
    cached_input = x;
    Tensor<T> y = x;
    for (T& v : y.data) v = v > T(0) ? v : T(0);
    return y;
  }

  Tensor<T> backward(const Tensor<T>& gy) {
    Tensor<T> gx = gy;
    for (size_t i = 0; i < gx.data.size(); ++i)
      if (!(cached_input.data[i] > T(0))) gx.data[i] = T(0);
    return gx;
  }
};

/// 2x bilinear upsampling (half-pixel centers). Even output rows/cols mix
/// the previous source sample at weight 1/4; odd ones mix the next.
template <class T>
struct Upsample2x {
  int in_h = 0, in_w = 0;

  static void taps(int o, int extent, int& i0, int& i1, T& w0, T& w1) {
    int k = o / 2;
    if (o % 2 == 0) {
      i0 = std::max(k - 1, 0);
      i1 = k;
      w0 = T(0.25);
      w1 = T(0.75);
    } else {
      i0 = k;
      i1 = std::min(k + 1, extent - 1);
      w0 = T(0.75);
      w1 = T(0.25);
    }
  }

  Tensor<T> forward(const Tensor<T>& x) {
    in_h = x.h;
    in_w = x.w;
    Tensor<T> y(x.n, x.c, x.h * 2, x.w * 2);
    for (int ni = 0; ni < x.n; ++ni)
      for (int ci = 0; ci < x.c; ++ci)
        for (int oy = 0; oy < y.h; ++oy) {
          int y0, y1;
          T wy0, wy1;
          taps(oy, x.h, y0, y1, wy0, wy1);
          const T* r0 = x.row(ni, ci, y0);
          const T* r1 = x.row(ni, ci, y1);
          T* out = y.row(ni, ci, oy);
          for (int ox = 0; ox < y.w; ++ox) {
            int x0, x1;
            T wx0, wx1;
            taps(ox, x.w, x0, x1, wx0, wx1);
            out[ox] = wy0 * (wx0 * r0[x0] + wx1 * r0[x1]) +
                      wy1 * (wx0 * r1[x0] + wx1 * r1[x1]);
          }
        }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& gy) {
    Tensor<T> gx(gy.n, gy.c, in_h, in_w);
    for (int ni = 0; ni < gy.n; ++ni)
      for (int ci = 0; ci < gy.c; ++ci)
        for (int oy = 0; oy < gy.h; ++oy) {
          int y0, y1;
          T wy0, wy1;
          taps(oy, in_h, y0, y1, wy0, wy1);
          const T* g = gy.row(ni, ci, oy);
          T* gx0 = gx.row(ni, ci, y0);
          T* gx1 = gx.row(ni, ci, y1);
          for (int ox = 0; ox < gy.w; ++ox) {
            int x0, x1;
            T wx0, wx1;
            taps(ox, in_w, x0, x1, wx0, wx1);
            gx0[x0] += wy0 * wx0 * g[ox];
            gx0[x1] += wy0 * wx1 * g[ox];
            gx1[x0] += wy1 * wx0 * g[ox];
            gx1[x1] += wy1 * wx1 * g[ox];
          }
        }
    return gx;
  }
};

}  // namespace intentsim::nn
