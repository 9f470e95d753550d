#pragma once

#include <functional>
#include <map>

#include "intentsim/coord/message.hpp"
#include "intentsim/env/dynamics.hpp"
#include "intentsim/learn/dqn.hpp"
#include "intentsim/percept/state.hpp"
#include "intentsim/predict/predictor.hpp"

namespace intentsim::coord {

using learn::Transition;
using percept::IntentionVariant;

/// Policies by robot kind; a predictor per kind when the variant needs one.
struct PolicySet {
  std::map<env::RobotKind, learn::QNetwork*> q;
  std::map<env::RobotKind, predict::Predictor*> predictor;
};

struct EpisodeConfig {
  IntentionVariant variant = IntentionVariant::RampPath;
  int out_size = 21;
  double sensor_fov = M_PI / 2.0;
  double sensor_range = 10.0;
  ChannelModel channel;
  bool predictor_history = false;

  bool train_mode = false;
  double eval_epsilon = 0.01;
  int64_t tick_budget = 0;  // eval cutoff; 0 disables
};

/// Trainer callbacks; absent in eval mode. after_decision fires once per
/// committed primitive (the global timestep), after the transition sink.
struct TrainSink {
  std::function<double()> epsilon;
  std::function<void(int agent_id, env::RobotKind kind, Transition&&)> on_transition;
  std::function<void()> after_decision;
  std::function<bool()> stop_requested;          // end the run mid-episode
  std::function<bool()> use_predicted_intention; // Predicted variant swap state
};

struct TrajectorySample {
  int64_t tick;
  int agent_id;
  double x, y, heading;
  bool carrying;
};

struct EpisodeMetrics {
  int objects_removed = 0;
  int64_t ticks = 0;
  int64_t decisions = 0;
  int obstacle_collisions = 0;
  int agent_collisions = 0;
  std::vector<double> agent_returns;      // per agent id
  std::vector<double> distance_traveled;  // per agent id, in cells
  std::vector<int> agent_decisions;       // per agent id
  std::vector<env::RewardEvent> events;
  std::vector<TrajectorySample> trajectory;
  size_t broadcast_bytes = 0;
  size_t broadcast_messages = 0;
};

/// Remaining intended paths for a decider, reconstructed from its mailbox:
/// each sender's latest message truncated by elapsed ticks (one cell per
/// tick), collapsing to the final waypoint once the path is exhausted.
std::vector<percept::IntentionRecord> intentions_for(int decider, const Mailbox& mailbox,
                                                     int64_t world_tick);

/// Ground-truth counterpart used to validate the protocol: remaining
/// primitive paths straight from the world, current cell for idle agents
/// that have committed at least once.
std::vector<percept::IntentionRecord> intentions_from_world(
    int decider, const env::WorldState& world, const std::vector<uint8_t>& ever_committed);

/// Decentralized asynchronous episode: idle agents decide in id order each
/// tick (sense, render intentions, act, broadcast), then the world advances
/// one tick. Returns metrics; streams transitions through the sink in train
/// mode. Throws std::invalid_argument when a present robot kind lacks a
/// policy.
EpisodeMetrics run_episode(env::WorldState& world, PolicySet& policies,
                           const EpisodeConfig& config, TrainSink* sink,
                           std::mt19937& action_rng, std::mt19937& channel_rng);

/// Hook for protocol tests: called right before each action selection with
/// the decider id and its rendered intention records.
using DecisionProbe =
    std::function<void(int agent_id, const std::vector<percept::IntentionRecord>& records,
                       const env::WorldState& world, const std::vector<uint8_t>& ever_committed)>;

EpisodeMetrics run_episode(env::WorldState& world, PolicySet& policies,
                           const EpisodeConfig& config, TrainSink* sink,
                           std::mt19937& action_rng, std::mt19937& channel_rng,
                           const DecisionProbe& probe);

}  // namespace intentsim::coord
