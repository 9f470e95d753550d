#pragma once

#include <cmath>

#include "intentsim/nn/tensor.hpp"

namespace intentsim::nn {

/// Huber-style smooth L1 on one prediction/target pair.
template <class T>
T smooth_l1(T pred, T target) {
  T d = pred - target;
  T a = d < T(0) ? -d : d;
  return a < T(1) ? T(0.5) * d * d : a - T(0.5);
}

template <class T>
T smooth_l1_grad(T pred, T target) {
  T d = pred - target;
  if (d > T(1)) return T(1);
  if (d < T(-1)) return T(-1);
  return d;
}

/// Mean binary cross entropy over probability maps with soft targets in
/// [0, 1]. Probabilities are clamped away from 0/1 for finiteness.
template <class T>
T bce_mean(const Tensor<T>& prob, const Tensor<T>& target) {
  if (!prob.same_shape(target)) throw std::invalid_argument("bce: shape mismatch");
  const T lo = T(1e-12), hi = T(1) - T(1e-12);
  double sum = 0.0;
  for (size_t i = 0; i < prob.data.size(); ++i) {
    T p = prob.data[i];
    p = p < lo ? lo : (p > hi ? hi : p);
    T t = target.data[i];
    sum += -(double(t) * std::log(double(p)) + (1.0 - double(t)) * std::log(1.0 - double(p)));
  }
  return T(sum / double(prob.data.size()));
}

/// Numerically stable mean BCE straight from logits; optionally produces
/// the logit gradient (of the mean) in grad_logits.
template <class T>
T bce_with_logits_mean(const Tensor<T>& logits, const Tensor<T>& target,
                       Tensor<T>* grad_logits) {
  if (!logits.same_shape(target)) throw std::invalid_argument("bce: shape mismatch");
  if (grad_logits) *grad_logits = Tensor<T>(logits.n, logits.c, logits.h, logits.w);
  const double inv_n = 1.0 / double(logits.data.size());
  double sum = 0.0;
  for (size_t i = 0; i < logits.data.size(); ++i) {
    double z = double(logits.data[i]);
    double t = double(target.data[i]);
    // log(1 + e^-|z|) + max(z, 0) - z*t
    sum += std::log1p(std::exp(-std::abs(z))) + (z > 0.0 ? z : 0.0) - z * t;
    if (grad_logits) {
      double sig = 1.0 / (1.0 + std::exp(-z));
      grad_logits->data[i] = T((sig - t) * inv_n);
    }
  }
  return T(sum * inv_n);
}

template <class T>
Tensor<T> sigmoid(const Tensor<T>& logits) {
  Tensor<T> out = logits;
  for (T& v : out.data) v = T(1) / (T(1) + std::exp(-v));
  return out;
}

}  // namespace intentsim::nn
