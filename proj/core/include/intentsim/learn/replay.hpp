#pragma once

#include <deque>
#include <optional>
#include <random>

#include "intentsim/learn/qnetwork.hpp"

namespace intentsim::learn {

struct ActionIndex {
  int channel = 0;
  int row = 0;
  int col = 0;

  bool operator==(const ActionIndex&) const = default;
};

struct Transition {
  StateTensor state;
  ActionIndex action;
  float reward = 0.0f;  // the agent's reward events between this decision and its next
  StateTensor next_state;
  bool terminal = false;

  /// Predicted-intention variant only: the communicated ramp-path channel
  /// at decision time (the predictor's supervision target), and optionally
  /// the history channel appended to the predictor input.
  std::optional<grid::ScalarMap> true_intention;
  std::optional<grid::ScalarMap> history_channel;
};

/// FIFO ring of recent transitions with uniform sampling, one per robot
/// type during training.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(size_t capacity = 10000) : capacity_(capacity) {}

  size_t size() const { return items_.size(); }
  size_t capacity() const { return capacity_; }

  void push(Transition t) {
    items_.push_back(std::move(t));
    if (items_.size() > capacity_) items_.pop_front();
  }

  const Transition& at(size_t i) const { return items_[i]; }

  /// Uniform sample of `count` indices (with replacement), using the run's
  /// seeded generator.
  std::vector<size_t> sample_indices(size_t count, std::mt19937& rng) const {
    if (items_.empty()) throw std::invalid_argument("sampling from an empty replay buffer");
    std::uniform_int_distribution<size_t> u(0, items_.size() - 1);
    std::vector<size_t> out(count);
    for (size_t& i : out) i = u(rng);
    return out;
  }

 private:
  size_t capacity_;
  std::deque<Transition> items_;
};

}  // namespace intentsim::learn
