#include "intentsim/learn/dqn.hpp"

#include <cmath>

#include "intentsim/nn/losses.hpp"

namespace intentsim::learn {

double epsilon_at(int64_t step, const TrainConfig& config) {
  if (step < 0 || step > config.total_steps)
    throw std::invalid_argument("epsilon_at: step outside [0, total]");
  const int64_t anneal = config.anneal_steps();
  if (anneal <= 0 || step >= anneal) return config.epsilon_final;
  return 1.0 - (1.0 - config.epsilon_final) * double(step) / double(anneal);
}

ActionIndex argmax_action(const QValueMap& qmap, int ni) {
  if (qmap.size() == 0) throw std::invalid_argument("argmax over an empty Q-map");
  ActionIndex best{0, 0, 0};
  float best_v = qmap.at(ni, 0, 0, 0);
  for (int c = 0; c < qmap.c; ++c)
    for (int y = 0; y < qmap.h; ++y) {
      const float* row = qmap.row(ni, c, y);
      for (int x = 0; x < qmap.w; ++x)
        if (row[x] > best_v) {  // strict: ties keep the lowest linear index
          best_v = row[x];
          best = {c, y, x};
        }
    }
  return best;
}

ActionIndex select_action(const QValueMap& qmap, double epsilon, std::mt19937& rng) {
  if (qmap.n != 1 || qmap.size() == 0)
    throw std::invalid_argument("select_action expects a single-sample, non-empty Q-map");
  if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon outside [0, 1]");
  if (epsilon > 0.0 &&
      std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon) {
    size_t total = size_t(qmap.c) * qmap.h * qmap.w;
    size_t pick = std::uniform_int_distribution<size_t>(0, total - 1)(rng);
    int c = int(pick / (size_t(qmap.h) * qmap.w));
    int rem = int(pick % (size_t(qmap.h) * qmap.w));
    return {c, rem / qmap.w, rem % qmap.w};
  }
  return argmax_action(qmap, 0);
}

QBatchFn batch_fn(QNetwork& net) {
  return [&net](const std::vector<const StateTensor*>& states) {
    return net.forward_batch(to_input_batch(states), /*train=*/false);
  };
}

std::vector<double> double_dqn_targets(const std::vector<const Transition*>& batch,
                                       const QBatchFn& online, const QBatchFn& target,
                                       double gamma) {
  if (batch.empty()) throw std::invalid_argument("double_dqn_targets: empty batch");
  std::vector<double> targets(batch.size());
  std::vector<const StateTensor*> next_states;
  std::vector<size_t> next_rows;
  for (size_t i = 0; i < batch.size(); ++i) {
    targets[i] = double(batch[i]->reward);
    if (!batch[i]->terminal) {
      next_rows.push_back(i);
      next_states.push_back(&batch[i]->next_state);
    }
  }
  if (!next_states.empty()) {
    QValueMap online_q = online(next_states);
    QValueMap target_q = target(next_states);
    for (size_t k = 0; k < next_rows.size(); ++k) {
      ActionIndex a = argmax_action(online_q, int(k));
      targets[next_rows[k]] +=
          gamma * double(target_q.at(int(k), a.channel, a.row, a.col));
    }
  }
  return targets;
}

float train_on_indices(ReplayBuffer& buffer, const std::vector<size_t>& indices,
                       QNetwork& online, QNetwork& target, const TrainConfig& config,
                       nn::SgdOptimizer<float>& optimizer) {
  std::vector<const Transition*> batch;
  batch.reserve(indices.size());
  for (size_t i : indices) batch.push_back(&buffer.at(i));

  std::vector<double> targets =
      double_dqn_targets(batch, batch_fn(online), batch_fn(target), config.gamma);

  std::vector<const StateTensor*> states;
  states.reserve(batch.size());
  for (const Transition* t : batch) states.push_back(&t->state);
  nn::Tensor<float> input = to_input_batch(states);
  QValueMap q = online.forward_batch(input, /*train=*/true);

  // Smooth-L1 on the chosen action cells, mean over the batch; all other
  // cells carry zero gradient.
  nn::Tensor<float> grad(q.n, q.c, q.h, q.w);
  double loss = 0.0;
  const float inv_n = 1.0f / float(batch.size());
  for (size_t i = 0; i < batch.size(); ++i) {
    const ActionIndex& a = batch[i]->action;
    float pred = q.at(int(i), a.channel, a.row, a.col);
    float tgt = float(targets[i]);
    loss += double(nn::smooth_l1(pred, tgt));
    grad.at(int(i), a.channel, a.row, a.col) = nn::smooth_l1_grad(pred, tgt) * inv_n;
  }
  loss *= double(inv_n);

  online.fcn().zero_grad();
  online.fcn().backward(grad);
  auto params = online.fcn().params();
  optimizer.step(params, config.sgd());
  return float(loss);
}

std::optional<float> train_step(ReplayBuffer& buffer, QNetwork& online, QNetwork& target,
                                const TrainConfig& config, int64_t step, std::mt19937& rng,
                                nn::SgdOptimizer<float>& optimizer) {
  if (config.train_frequency <= 0 || step % config.train_frequency != 0) return std::nullopt;
  if (buffer.size() < size_t(config.batch_size)) return std::nullopt;
  auto indices = buffer.sample_indices(size_t(config.batch_size), rng);
  return train_on_indices(buffer, indices, online, target, config, optimizer);
}

bool sync_target(QNetwork& online, QNetwork& target, int64_t step, const TrainConfig& config) {
  if (step <= 0 || config.target_update_interval <= 0) return false;
  if (step % config.target_update_interval != 0) return false;
  target.copy_from(online);
  return true;
}

}  // namespace intentsim::learn
