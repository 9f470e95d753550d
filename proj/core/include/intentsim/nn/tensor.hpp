#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace intentsim::nn {

/// Dense NCHW tensor. Small by design: the networks here are assembled from
/// explicit layer objects, not a graph runtime.
template <class T>
struct Tensor {
  int n = 0, c = 0, h = 0, w = 0;
  std::vector<T> data;

  Tensor() = default;
  Tensor(int n_, int c_, int h_, int w_, T fill = T(0))
      : n(n_), c(c_), h(h_), w(w_), data(size_t(n_) * c_ * h_ * w_, fill) {}

  size_t size() const { return data.size(); }
  bool same_shape(const Tensor& o) const {
    return n == o.n && c == o.c && h == o.h && w == o.w;
  }

  T* plane(int ni, int ci) { return data.data() + ((size_t(ni) * c + ci) * h) * w; }
  const T* plane(int ni, int ci) const {
    return data.data() + ((size_t(ni) * c + ci) * h) * w;
  }
  T* row(int ni, int ci, int y) { return plane(ni, ci) + size_t(y) * w; }
  const T* row(int ni, int ci, int y) const { return plane(ni, ci) + size_t(y) * w; }

  T& at(int ni, int ci, int y, int x) { return row(ni, ci, y)[x]; }
  T at(int ni, int ci, int y, int x) const { return row(ni, ci, y)[x]; }

  void fill(T v) { data.assign(data.size(), v); }
};

/// A named view over one parameter (or state) vector and its gradient.
/// Non-trainable entries (BatchNorm running statistics) are serialized with
/// checkpoints but skipped by the optimizer.
template <class T>
struct ParamView {
  std::string name;
  std::vector<T>* value = nullptr;
  std::vector<T>* grad = nullptr;  // null for non-trainable state
  bool trainable = true;
};

}  // namespace intentsim::nn
