#pragma once

#include "intentsim/learn/qnetwork.hpp"
#include "intentsim/nn/sgd.hpp"

namespace intentsim::predict {

using grid::ScalarMap;
using percept::StateTensor;

/// Which source fills the tensor's intention slot.
enum class IntentionSource : uint8_t { Communicated, Predicted };

/// Communicated maps for the first nine tenths of training, predicted maps
/// for the last tenth and for execution.
IntentionSource intention_source(int64_t step, int64_t total, bool training);

struct PredictorSpec {
  nn::FcnSpec fcn;  // out_channels fixed at 1
  bool with_history = false;

  static PredictorSpec make(env::Task task, bool with_history, nn::Scale scale) {
    PredictorSpec spec;
    spec.fcn.in_channels = percept::base_channel_count(task) + (with_history ? 1 : 0);
    spec.fcn.out_channels = 1;
    spec.fcn.scale = scale;
    spec.with_history = with_history;
    return spec;
  }
};

/// Mean binary cross entropy between a predicted probability map and the
/// communicated ramp-path channel (soft labels in [0, 1]).
float predictor_loss(const ScalarMap& predicted, const ScalarMap& target);

/// Fully convolutional intention predictor: same backbone family as the
/// policy network with a logistic output map.
class Predictor {
 public:
  Predictor() = default;
  explicit Predictor(const PredictorSpec& spec) : spec_(spec), net_(spec.fcn) {}

  void init(uint32_t seed) { net_.init(seed); }
  const PredictorSpec& spec() const { return spec_; }
  nn::Fcn<float>& fcn() { return net_; }

  /// Builds the predictor input from a state tensor: the base channels
  /// (everything before the intention slot) plus the optional history
  /// channel.
  nn::Tensor<float> make_input(const StateTensor& state,
                               const ScalarMap* history_channel) const;

  /// Evaluation-mode prediction, values in (0, 1), same shape as a
  /// ramp-path intention channel.
  ScalarMap predict(const StateTensor& state, const ScalarMap* history_channel);

  /// One supervised step (BCE on logits) over a batch of inputs/targets.
  /// Returns the batch loss.
  float train_batch(const nn::Tensor<float>& inputs, const nn::Tensor<float>& targets,
                    const nn::SgdHyper<float>& hyper);

 private:
  PredictorSpec spec_;
  nn::Fcn<float> net_;
  nn::SgdOptimizer<float> optimizer_;
};

}  // namespace intentsim::predict
