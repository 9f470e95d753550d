#pragma once

#include <string>
#include <vector>

#include "intentsim/env/spec.hpp"
#include "intentsim/percept/belief.hpp"
#include "intentsim/percept/intention.hpp"

namespace intentsim::percept {

using grid::ScalarMap;

/// Stack of egocentric map channels fed to the Q-network. Channel order is
/// fixed per (task, variant): environment, agents, receptacle distances
/// (foraging only), self distances, then the intention channel(s).
struct StateTensor {
  std::vector<ScalarMap> channels;
  std::vector<std::string> channel_names;

  int size() const { return channels.empty() ? 0 : channels.front().width(); }
};

/// Channel value constants; fixed here and echoed into run metadata so
/// experiments stay comparable.
struct ChannelEncoding {
  float env_free = 0.0f;
  float env_unknown = 0.5f;
  float env_obstacle = 1.0f;
  float env_object = 0.75f;  // distinct from walls so a pointwise filter can find it
  float self_footprint = 1.0f;
  float self_carrying = 0.9f;
  float other_footprint = 0.6f;
  float other_carrying = 0.5f;
};

inline constexpr ChannelEncoding kChannelEncoding{};

/// Base channel count before intention channels (4 foraging, 3 rescue).
int base_channel_count(env::Task task);

/// Total network input channels for a task/variant/team combination.
int state_channel_count(env::Task task, IntentionVariant variant, int team_size);

/// Assembles the egocentric state tensor from the agent's belief. Distance
/// fields are computed on the believed grid (Unknown traversable) and
/// normalized by the grid diagonal; unreachable cells saturate at 1.
StateTensor build_state_tensor(const AgentBelief& belief, const env::AgentState& self,
                               const IntentionEncoding& intention, const env::EnvironmentSpec& spec,
                               const env::CellRect& receptacle, int out_size);

}  // namespace intentsim::percept
