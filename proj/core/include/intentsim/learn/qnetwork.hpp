#pragma once

#include "intentsim/env/types.hpp"
#include "intentsim/nn/fcn.hpp"
#include "intentsim/percept/state.hpp"

namespace intentsim::learn {

using nn::FcnSpec;
using nn::Scale;
using percept::StateTensor;

/// Per-channel, per-cell action values, pixel-aligned with the state.
using QValueMap = nn::Tensor<float>;

/// Architecture note: input channel count is a function of task, intention
/// variant and team size; output channel count is the robot kind's action
/// channel count; spatial dims are preserved end to end.
struct QNetworkSpec {
  FcnSpec fcn;

  static QNetworkSpec make(env::Task task, percept::IntentionVariant variant, int team_size,
                           env::RobotKind kind, Scale scale) {
    QNetworkSpec spec;
    spec.fcn.in_channels = percept::state_channel_count(task, variant, team_size);
    spec.fcn.out_channels = env::action_channels(kind);
    spec.fcn.scale = scale;
    return spec;
  }
};

nn::Tensor<float> to_input_tensor(const StateTensor& state);

/// Batched conversion; all states must share shape.
nn::Tensor<float> to_input_batch(const std::vector<const StateTensor*>& states);

class QNetwork {
 public:
  QNetwork() = default;
  explicit QNetwork(const QNetworkSpec& spec) : spec_(spec), net_(spec.fcn) {}

  void init(uint32_t seed) { net_.init(seed); }

  const QNetworkSpec& spec() const { return spec_; }
  nn::Fcn<float>& fcn() { return net_; }

  /// Evaluation-mode forward (running statistics): deterministic.
  QValueMap forward(const StateTensor& state);
  QValueMap forward_batch(const nn::Tensor<float>& batch, bool train);

  void copy_from(QNetwork& other) { net_.copy_from(other.net_); }

 private:
  QNetworkSpec spec_;
  nn::Fcn<float> net_;
};

}  // namespace intentsim::learn
