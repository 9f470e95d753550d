#include "intentsim/learn/qnetwork.hpp"

namespace intentsim::learn {

nn::Tensor<float> to_input_tensor(const StateTensor& state) {
  return to_input_batch({&state});
}

nn::Tensor<float> to_input_batch(const std::vector<const StateTensor*>& states) {
  if (states.empty()) throw std::invalid_argument("empty state batch");
  const int ch = int(states[0]->channels.size());
  const int size = states[0]->size();
  nn::Tensor<float> t(int(states.size()), ch, size, size);
  for (size_t ni = 0; ni < states.size(); ++ni) {
    const StateTensor& s = *states[ni];
    if (int(s.channels.size()) != ch || s.size() != size)
      throw std::invalid_argument("state batch shape mismatch");
    for (int ci = 0; ci < ch; ++ci) {
      const auto& vals = s.channels[size_t(ci)].values();
      std::copy(vals.begin(), vals.end(), t.plane(int(ni), ci));
    }
  }
  return t;
}

QValueMap QNetwork::forward(const StateTensor& state) {
  if (int(state.channels.size()) != spec_.fcn.in_channels)
    throw std::invalid_argument("state channel count does not match the network input");
  return net_.forward(to_input_tensor(state), /*train=*/false);
}

QValueMap QNetwork::forward_batch(const nn::Tensor<float>& batch, bool train) {
  if (batch.c != spec_.fcn.in_channels)
    throw std::invalid_argument("state channel count does not match the network input");
  return net_.forward(batch, train);
}

}  // namespace intentsim::learn
