#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "intentsim/env/spec.hpp"

namespace intentsim::percept {

using env::WorldState;
using grid::CellCoord;
using grid::OccupancyGrid;
using grid::Pose;

struct ObservedObject {
  CellCoord cell;
  int64_t last_seen_tick = 0;
};

struct ObservedAgent {
  Pose pose;
  bool carrying = false;
  int64_t last_seen_tick = 0;
};

/// One agent's private world model: an online-built occupancy grid plus
/// last-observed object and agent records. Unseen regions stay Unknown and
/// records go stale until re-observed; the sensor itself is noise-free.
class AgentBelief {
 public:
  AgentBelief() = default;
  AgentBelief(int self_id, int grid_width, int grid_height, size_t num_agents,
              size_t num_objects);

  int self_id() const { return self_id_; }
  const OccupancyGrid& grid() const { return grid_; }

  const std::vector<std::optional<ObservedObject>>& objects() const { return objects_; }
  const std::vector<std::optional<ObservedAgent>>& agents() const { return agents_; }

  /// Pose history of another agent, newest last, at most 20 entries.
  /// Maintained from ground truth each tick (pose tracking is assumed for
  /// the history-map variant, no communication involved).
  const std::deque<Pose>& history(int agent_id) const { return history_[size_t(agent_id)]; }

  static constexpr size_t kHistoryCapacity = 20;

  friend void integrate_observation(AgentBelief& belief, const std::vector<CellCoord>& visible,
                                    const WorldState& truth);
  friend void update_pose_history(AgentBelief& belief, const WorldState& truth);

 private:
  int self_id_ = 0;
  OccupancyGrid grid_;  // starts all-Unknown
  std::vector<std::optional<ObservedObject>> objects_;
  std::vector<std::optional<ObservedAgent>> agents_;
  std::vector<std::deque<Pose>> history_;
};

/// Overwrites believed cell states with ground truth for the visible cells
/// only, refreshes object/agent records seen inside them, and forgets
/// object records whose recorded cell is visibly empty. Invisible regions
/// keep whatever (possibly outdated) state they had.
void integrate_observation(AgentBelief& belief, const std::vector<CellCoord>& visible,
                           const WorldState& truth);

/// Appends every other agent's current true pose to its history ring.
void update_pose_history(AgentBelief& belief, const WorldState& truth);

}  // namespace intentsim::percept
