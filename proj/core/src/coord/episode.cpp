#include "intentsim/coord/episode.hpp"

#include <cmath>

#include "intentsim/grid/egocentric.hpp"
#include "intentsim/grid/raycast.hpp"

namespace intentsim::coord {

using env::AgentState;
using env::RobotKind;
using env::WorldState;
using grid::CellCoord;
using learn::ActionIndex;
using percept::AgentBelief;
using percept::IntentionRecord;
using percept::StateTensor;

std::vector<IntentionRecord> intentions_for(int decider, const Mailbox& mailbox,
                                            int64_t world_tick) {
  std::vector<IntentionRecord> records;
  for (size_t sender = 0; sender < mailbox.senders(); ++sender) {
    if (int(sender) == decider) continue;
    const auto& entry = mailbox.from(int(sender));
    if (!entry) continue;
    const auto& wp = entry->message.waypoints;
    int64_t elapsed = world_tick - entry->sent_tick;
    size_t skip = size_t(std::min<int64_t>(std::max<int64_t>(elapsed, 0), int64_t(wp.size()) - 1));
    IntentionRecord rec;
    rec.agent_id = int(sender);
    rec.waypoints.assign(wp.begin() + skip, wp.end());
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<IntentionRecord> intentions_from_world(int decider, const WorldState& world,
                                                   const std::vector<uint8_t>& ever_committed) {
  std::vector<IntentionRecord> records;
  for (const AgentState& a : world.agents) {
    if (a.id == decider) continue;
    IntentionRecord rec;
    rec.agent_id = a.id;
    if (a.primitive) {
      const auto& p = *a.primitive;
      size_t at = std::min(p.next_index - 1, p.path.size() - 1);
      rec.waypoints.assign(p.path.begin() + at, p.path.end());
    } else if (ever_committed[size_t(a.id)]) {
      rec.waypoints = {a.cell()};
    } else {
      continue;  // never committed anything: nothing to render
    }
    records.push_back(std::move(rec));
  }
  return records;
}

namespace {

struct AgentRuntime {
  AgentBelief belief;
  Mailbox mailbox;
  uint32_t next_seq = 1;

  bool has_pending = false;
  StateTensor pending_state;
  ActionIndex pending_action;
  double pending_reward = 0.0;
  std::optional<grid::ScalarMap> pending_true_intention;
  std::optional<grid::ScalarMap> pending_history;
};

struct PendingDelivery {
  int64_t due_tick;
  int recipient;
  IntentionMessage message;
  int64_t sent_tick;
};

class EpisodeDriver {
 public:
  EpisodeDriver(WorldState& world, PolicySet& policies, const EpisodeConfig& cfg,
                TrainSink* sink, std::mt19937& action_rng, std::mt19937& channel_rng,
                const DecisionProbe& probe)
      : world_(world),
        policies_(policies),
        cfg_(cfg),
        sink_(sink),
        action_rng_(action_rng),
        channel_rng_(channel_rng),
        probe_(probe) {
    for (const AgentState& a : world.agents) {
      if (policies_.q.find(a.kind) == policies_.q.end())
        throw std::invalid_argument(std::string("no policy for robot kind ") +
                                    env::to_string(a.kind));
      if (cfg.variant == percept::IntentionVariant::Predicted &&
          policies_.predictor.find(a.kind) == policies_.predictor.end())
        throw std::invalid_argument(std::string("no intention predictor for robot kind ") +
                                    env::to_string(a.kind));
    }
    const size_t n = world.agents.size();
    ever_committed_.assign(n, 0);
    for (size_t i = 0; i < n; ++i) {
      runtime_.emplace_back();
      runtime_.back().belief = AgentBelief(int(i), world.grid.width(), world.grid.height(), n,
                                           world.objects.size());
      runtime_.back().mailbox = Mailbox(n);
    }
    metrics_.agent_returns.assign(n, 0.0);
    metrics_.distance_traveled.assign(n, 0.0);
    metrics_.agent_decisions.assign(n, 0);
  }

  EpisodeMetrics run() {
    sense_all();
    while (true) {
      if (stop_requested()) break;
      decision_phase();
      if (stop_requested()) break;

      record_trajectory();
      std::vector<grid::Pose> before;
      for (const AgentState& a : world_.agents) before.push_back(a.pose);
      env::TickResult res = env::tick(world_);
      absorb(res);
      for (const AgentState& a : world_.agents)
        metrics_.distance_traveled[size_t(a.id)] +=
            std::hypot(a.pose.x - before[size_t(a.id)].x, a.pose.y - before[size_t(a.id)].y);
      deliver_due_messages();
      sense_all();
      metrics_.ticks++;

      if (env::is_episode_done(world_)) {
        finalize_terminal_transitions();
        break;
      }
      if (cfg_.tick_budget > 0 && metrics_.ticks >= cfg_.tick_budget) break;
    }
    metrics_.objects_removed = int(world_.objects.size()) - world_.objects_remaining();
    return std::move(metrics_);
  }

 private:
  bool stop_requested() const {
    return sink_ && sink_->stop_requested && sink_->stop_requested();
  }

  void sense_all() {
    for (AgentState& a : world_.agents) {
      auto visible =
          grid::raycast_visibility(world_.grid, a.pose, cfg_.sensor_fov, cfg_.sensor_range);
      visible.push_back(a.cell());  // an agent always knows the cell it is on
      percept::integrate_observation(runtime_[size_t(a.id)].belief, visible, world_);
    }
    for (AgentState& a : world_.agents)
      percept::update_pose_history(runtime_[size_t(a.id)].belief, world_);
  }

  void record_trajectory() {
    for (const AgentState& a : world_.agents)
      metrics_.trajectory.push_back(
          {world_.tick, a.id, a.pose.x, a.pose.y, a.pose.heading, a.carrying});
  }

  // The intention channel(s) for a decision, plus the communicated ramp
  // channel when the predictor needs a supervision target.
  struct IntentionBundle {
    percept::IntentionEncoding encoding;
    std::optional<grid::ScalarMap> communicated;  // Predicted variant only
    std::optional<grid::ScalarMap> history;       // predictor input extension
  };

  IntentionBundle render_intentions(const AgentState& self) {
    AgentRuntime& rt = runtime_[size_t(self.id)];
    IntentionBundle bundle;
    const int W = world_.grid.width(), H = world_.grid.height();
    const int team = int(world_.agents.size());

    std::vector<IntentionRecord> records;
    if (cfg_.variant == percept::IntentionVariant::HistoryMap) {
      for (const AgentState& other : world_.agents) {
        if (other.id == self.id) continue;
        const auto& ring = rt.belief.history(other.id);
        if (ring.empty()) continue;
        IntentionRecord rec;
        rec.agent_id = other.id;
        for (const grid::Pose& p : ring) rec.waypoints.push_back(grid::cell_of(p));
        records.push_back(std::move(rec));
      }
    } else if (cfg_.variant != percept::IntentionVariant::None) {
      records = intentions_for(self.id, rt.mailbox, world_.tick);
    }
    if (probe_) probe_(self.id, records, world_, ever_committed_);

    bundle.encoding =
        percept::encode_intention(records, cfg_.variant, self.pose, cfg_.out_size, team, W, H);

    if (cfg_.variant == percept::IntentionVariant::Predicted) {
      bundle.communicated = bundle.encoding.channels.at(0);
      if (cfg_.predictor_history) {
        std::vector<IntentionRecord> hist;
        for (const AgentState& other : world_.agents) {
          if (other.id == self.id) continue;
          const auto& ring = rt.belief.history(other.id);
          if (ring.empty()) continue;
          IntentionRecord rec;
          rec.agent_id = other.id;
          for (const grid::Pose& p : ring) rec.waypoints.push_back(grid::cell_of(p));
          hist.push_back(std::move(rec));
        }
        bundle.history = percept::encode_intention(hist, percept::IntentionVariant::HistoryMap,
                                                   self.pose, cfg_.out_size, team, W, H)
                             .channels.at(0);
      }
    }
    return bundle;
  }

  bool predicted_slot_active() const {
    if (cfg_.variant != percept::IntentionVariant::Predicted) return false;
    if (!cfg_.train_mode) return true;  // execution always runs on predictions
    return sink_ && sink_->use_predicted_intention && sink_->use_predicted_intention();
  }

  void decision_phase() {
    for (AgentState& agent : world_.agents) {
      if (!agent.idle()) continue;
      if (stop_requested()) return;
      AgentRuntime& rt = runtime_[size_t(agent.id)];

      IntentionBundle bundle = render_intentions(agent);
      StateTensor state =
          percept::build_state_tensor(rt.belief, agent, bundle.encoding, world_.spec,
                                      world_.receptacle, cfg_.out_size);
      if (predicted_slot_active()) {
        predict::Predictor* pred = policies_.predictor.at(agent.kind);
        grid::ScalarMap predicted =
            pred->predict(state, bundle.history ? &*bundle.history : nullptr);
        state.channels.back() = std::move(predicted);
      }

      if (cfg_.train_mode && rt.has_pending) {
        Transition t;
        t.state = std::move(rt.pending_state);
        t.action = rt.pending_action;
        t.reward = float(rt.pending_reward);
        t.next_state = state;
        t.terminal = false;
        t.true_intention = std::move(rt.pending_true_intention);
        t.history_channel = std::move(rt.pending_history);
        rt.has_pending = false;
        if (sink_ && sink_->on_transition) sink_->on_transition(agent.id, agent.kind, std::move(t));
      }

      double epsilon = cfg_.train_mode && sink_ && sink_->epsilon ? sink_->epsilon()
                                                                  : cfg_.eval_epsilon;
      learn::QNetwork& net = *policies_.q.at(agent.kind);
      ActionIndex action;
      if (epsilon >= 1.0) {
        // Prefill: the map is never read, skip the forward pass.
        learn::QValueMap zero(1, net.spec().fcn.out_channels, cfg_.out_size, cfg_.out_size);
        action = learn::select_action(zero, 1.0, action_rng_);
      } else {
        action = learn::select_action(net.forward(state), epsilon, action_rng_);
      }

      grid::Pose target_point =
          grid::ego_to_global(agent.pose, cfg_.out_size, action.row, action.col);
      CellCoord target = grid::cell_of(target_point.x, target_point.y);
      const env::Primitive& prim =
          env::begin_primitive(world_, agent.id, action.channel, target, rt.belief.grid());
      ever_committed_[size_t(agent.id)] = 1;
      metrics_.decisions++;
      metrics_.agent_decisions[size_t(agent.id)]++;

      broadcast(agent.id, prim.path, prim.actuate);

      rt.has_pending = true;
      rt.pending_state = std::move(state);
      rt.pending_action = action;
      rt.pending_reward = 0.0;
      rt.pending_true_intention = std::move(bundle.communicated);
      rt.pending_history = std::move(bundle.history);

      if (cfg_.train_mode && sink_ && sink_->after_decision) sink_->after_decision();
    }
  }

  void broadcast(int sender, const std::vector<CellCoord>& path, bool effector) {
    IntentionMessage msg;
    msg.agent_id = uint8_t(sender);
    msg.seq = runtime_[size_t(sender)].next_seq++;
    msg.effector = effector;
    msg.waypoints = path;
    metrics_.broadcast_bytes += encode_message(msg).size() * (world_.agents.size() - 1);
    metrics_.broadcast_messages += world_.agents.size() - 1;

    for (const AgentState& other : world_.agents) {
      if (other.id == sender) continue;
      if (cfg_.channel.drop_probability > 0.0 &&
          std::uniform_real_distribution<double>(0.0, 1.0)(channel_rng_) <
              cfg_.channel.drop_probability)
        continue;
      if (cfg_.channel.delay_ticks <= 0) {
        runtime_[size_t(other.id)].mailbox.deliver(msg, world_.tick);
      } else {
        deliveries_.push_back(
            {world_.tick + cfg_.channel.delay_ticks, other.id, msg, world_.tick});
      }
    }
  }

  void deliver_due_messages() {
    for (auto it = deliveries_.begin(); it != deliveries_.end();) {
      if (it->due_tick <= world_.tick) {
        runtime_[size_t(it->recipient)].mailbox.deliver(it->message, it->sent_tick);
        it = deliveries_.erase(it);
      } else {
        ++it;
      }
    }
  }

  void absorb(const env::TickResult& res) {
    for (const env::RewardEvent& e : res.events) {
      metrics_.events.push_back(e);
      metrics_.agent_returns[size_t(e.agent_id)] += e.magnitude;
      runtime_[size_t(e.agent_id)].pending_reward += e.magnitude;
      if (e.kind == env::RewardKind::ObstacleCollision) metrics_.obstacle_collisions++;
      if (e.kind == env::RewardKind::AgentCollision) metrics_.agent_collisions++;
    }
    for (const auto& term : res.terminations) {
      if (term.reason == env::PrimitiveEnd::Completed) continue;
      // Aborted mid-path: retract the stale intention so receivers render
      // the agent where it actually stopped.
      const AgentState& a = world_.agents[size_t(term.agent_id)];
      broadcast(term.agent_id, {a.cell()}, false);
    }
  }

  void finalize_terminal_transitions() {
    if (!cfg_.train_mode || !sink_ || !sink_->on_transition) return;
    for (AgentState& agent : world_.agents) {
      AgentRuntime& rt = runtime_[size_t(agent.id)];
      if (!rt.has_pending) continue;
      IntentionBundle bundle = render_intentions(agent);
      StateTensor state = percept::build_state_tensor(rt.belief, agent, bundle.encoding,
                                                      world_.spec, world_.receptacle,
                                                      cfg_.out_size);
      Transition t;
      t.state = std::move(rt.pending_state);
      t.action = rt.pending_action;
      t.reward = float(rt.pending_reward);
      t.next_state = std::move(state);
      t.terminal = true;
      t.true_intention = std::move(rt.pending_true_intention);
      t.history_channel = std::move(rt.pending_history);
      rt.has_pending = false;
      sink_->on_transition(agent.id, agent.kind, std::move(t));
    }
  }

  WorldState& world_;
  PolicySet& policies_;
  const EpisodeConfig& cfg_;
  TrainSink* sink_;
  std::mt19937& action_rng_;
  std::mt19937& channel_rng_;
  DecisionProbe probe_;

  std::vector<AgentRuntime> runtime_;
  std::vector<uint8_t> ever_committed_;
  std::vector<PendingDelivery> deliveries_;
  EpisodeMetrics metrics_;
};

}  // namespace

EpisodeMetrics run_episode(WorldState& world, PolicySet& policies, const EpisodeConfig& config,
                           TrainSink* sink, std::mt19937& action_rng, std::mt19937& channel_rng) {
  return run_episode(world, policies, config, sink, action_rng, channel_rng, DecisionProbe{});
}

EpisodeMetrics run_episode(WorldState& world, PolicySet& policies, const EpisodeConfig& config,
                           TrainSink* sink, std::mt19937& action_rng, std::mt19937& channel_rng,
                           const DecisionProbe& probe) {
  EpisodeDriver driver(world, policies, config, sink, action_rng, channel_rng, probe);
  return driver.run();
}

}  // namespace intentsim::coord
