#pragma once

#include <functional>
#include <optional>

#include "intentsim/learn/replay.hpp"
#include "intentsim/nn/sgd.hpp"

namespace intentsim::learn {

/// Training recipe; defaults follow the published schedule exactly.
struct TrainConfig {
  double lr = 0.01;
  double momentum = 0.9;
  double weight_decay = 0.0001;
  int batch_size = 32;
  double grad_clip = 100.0;
  double gamma = 0.85;  // 0.35 for search and rescue
  int train_frequency = 4;
  int target_update_interval = 1000;
  int64_t total_steps = 160000;  // 160k or 240k at full scale; desk runs override
  double epsilon_final = 0.01;

  int64_t prefill_steps() const { return total_steps / 40; }
  int64_t anneal_steps() const { return total_steps / 10; }

  nn::SgdHyper<float> sgd() const {
    return {float(lr), float(momentum), float(weight_decay), float(grad_clip)};
  }
};

/// Linear anneal from 1 to epsilon_final over the first tenth of training,
/// constant afterwards.
double epsilon_at(int64_t step, const TrainConfig& config);

/// Greedy argmax over (channel, row, col) with probability 1 - epsilon
/// (ties resolve to the lowest linear index), else a uniformly random
/// index. The map must have batch dimension 1.
ActionIndex select_action(const QValueMap& qmap, double epsilon, std::mt19937& rng);

/// Deterministic greedy argmax of sample `ni` in a batched Q-map.
ActionIndex argmax_action(const QValueMap& qmap, int ni);

/// Batched evaluation hook: maps states to Q-maps. Tests substitute
/// constant stubs; production binds the network's evaluation-mode forward.
using QBatchFn = std::function<QValueMap(const std::vector<const StateTensor*>&)>;

QBatchFn batch_fn(QNetwork& net);

/// Double-DQN targets: r for terminal transitions, else
/// r + gamma * Q_target(s', argmax_a Q_online(s', a)). Accumulated in
/// double so the arithmetic is exact at float-representable inputs.
std::vector<double> double_dqn_targets(const std::vector<const Transition*>& batch,
                                       const QBatchFn& online, const QBatchFn& target,
                                       double gamma);

/// One gradient step on the given buffer rows: double-DQN smooth-L1 loss,
/// SGD with momentum/weight decay, global-norm gradient clipping. Returns
/// the batch loss.
float train_on_indices(ReplayBuffer& buffer, const std::vector<size_t>& indices,
                       QNetwork& online, QNetwork& target, const TrainConfig& config,
                       nn::SgdOptimizer<float>& optimizer);

/// Scheduled training step: runs only when `step` is a multiple of the
/// train frequency and the buffer holds at least one batch. Returns the
/// loss when a step ran.
std::optional<float> train_step(ReplayBuffer& buffer, QNetwork& online, QNetwork& target,
                                const TrainConfig& config, int64_t step, std::mt19937& rng,
                                nn::SgdOptimizer<float>& optimizer);

/// Hard-copies online into target when `step` is a positive multiple of the
/// update interval. Returns true when a sync happened.
bool sync_target(QNetwork& online, QNetwork& target, int64_t step, const TrainConfig& config);

}  // namespace intentsim::learn
