#include "intentsim/predict/predictor.hpp"

#include "intentsim/nn/losses.hpp"

namespace intentsim::predict {

IntentionSource intention_source(int64_t step, int64_t total, bool training) {
  if (step > total) throw std::invalid_argument("intention_source: step beyond total");
  if (!training) return IntentionSource::Predicted;
  // Integer form of step < 0.9 * total, exact for any total.
  return 10 * step < 9 * total ? IntentionSource::Communicated : IntentionSource::Predicted;
}

float predictor_loss(const ScalarMap& predicted, const ScalarMap& target) {
  if (predicted.width() != target.width() || predicted.height() != target.height())
    throw std::invalid_argument("predictor_loss: shape mismatch");
  nn::Tensor<float> p(1, 1, predicted.height(), predicted.width());
  nn::Tensor<float> t(1, 1, target.height(), target.width());
  std::copy(predicted.values().begin(), predicted.values().end(), p.data.begin());
  std::copy(target.values().begin(), target.values().end(), t.data.begin());
  return nn::bce_mean(p, t);
}

nn::Tensor<float> Predictor::make_input(const StateTensor& state,
                                        const ScalarMap* history_channel) const {
  const int base = spec_.fcn.in_channels - (spec_.with_history ? 1 : 0);
  if (int(state.channels.size()) < base)
    throw std::invalid_argument("predictor input: too few state channels");
  if (spec_.with_history && history_channel == nullptr)
    throw std::invalid_argument("predictor input: history channel required");
  const int size = state.size();
  nn::Tensor<float> t(1, spec_.fcn.in_channels, size, size);
  for (int c = 0; c < base; ++c) {
    const auto& vals = state.channels[size_t(c)].values();
    std::copy(vals.begin(), vals.end(), t.plane(0, c));
  }
  if (spec_.with_history) {
    const auto& vals = history_channel->values();
    std::copy(vals.begin(), vals.end(), t.plane(0, base));
  }
  return t;
}

ScalarMap Predictor::predict(const StateTensor& state, const ScalarMap* history_channel) {
  nn::Tensor<float> logits = net_.forward(make_input(state, history_channel), /*train=*/false);
  ScalarMap out(logits.w, logits.h);
  nn::Tensor<float> prob = nn::sigmoid(logits);
  std::copy(prob.data.begin(), prob.data.end(), out.values().begin());
  return out;
}

float Predictor::train_batch(const nn::Tensor<float>& inputs, const nn::Tensor<float>& targets,
                             const nn::SgdHyper<float>& hyper) {
  nn::Tensor<float> logits = net_.forward(inputs, /*train=*/true);
  nn::Tensor<float> grad;
  float loss = nn::bce_with_logits_mean(logits, targets, &grad);
  net_.zero_grad();
  net_.backward(grad);
  auto params = net_.params();
  optimizer_.step(params, hyper);
  return loss;
}

}  // namespace intentsim::predict
