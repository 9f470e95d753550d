#pragma once

#include <cmath>

#include "intentsim/nn/tensor.hpp"

namespace intentsim::nn {

/// SGD with momentum and classic weight decay (decay added to the
/// gradient). Global gradient-norm clipping is applied before the decay
/// term, the usual clip-then-step order.
template <class T>
struct SgdHyper {
  T lr = T(0.01);
  T momentum = T(0.9);
  T weight_decay = T(0.0001);
  T clip_norm = T(100);
};

template <class T>
class SgdOptimizer {
 public:
  /// Returns the pre-clip global gradient norm.
  T step(std::vector<ParamView<T>>& params, const SgdHyper<T>& hp) {
    if (velocity_.empty()) {
      for (const auto& p : params)
        velocity_.emplace_back(p.trainable ? p.value->size() : 0, T(0));
    }
    double norm_sq = 0.0;
    for (const auto& p : params) {
      if (!p.trainable) continue;
      for (T g : *p.grad) norm_sq += double(g) * double(g);
    }
    T norm = T(std::sqrt(norm_sq));
    T scale = (hp.clip_norm > T(0) && norm > hp.clip_norm) ? hp.clip_norm / norm : T(1);

    for (size_t i = 0; i < params.size(); ++i) {
      auto& p = params[i];
      if (!p.trainable) continue;
      auto& vel = velocity_[i];
      for (size_t k = 0; k < p.value->size(); ++k) {
        T g = (*p.grad)[k] * scale + hp.weight_decay * (*p.value)[k];
        vel[k] = hp.momentum * vel[k] + g;
        (*p.value)[k] -= hp.lr * vel[k];
      }
    }
    return norm;
  }

 private:
  std::vector<std::vector<T>> velocity_;
};

}  // namespace intentsim::nn
