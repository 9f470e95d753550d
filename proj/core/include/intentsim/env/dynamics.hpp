#pragma once

#include "intentsim/env/spec.hpp"

namespace intentsim::env {

/// Why a primitive stopped being in flight this tick.
enum class PrimitiveEnd : uint8_t {
  Completed,         // reached the path end (effector resolved, if any)
  ObstacleCollision,
  AgentCollision,
  PushBlocked,       // pushed object had nowhere to go
};

struct PrimitiveTermination {
  int agent_id = 0;
  PrimitiveEnd reason = PrimitiveEnd::Completed;
};

struct TickResult {
  std::vector<RewardEvent> events;
  std::vector<PrimitiveTermination> terminations;
  std::vector<int> removed_objects;
};

/// Commits a spatial action for an idle agent: channel 0 navigates to the
/// target, channel 1 navigates and then actuates the end effector. The path
/// is planned on `belief` (the agent's own map, Unknown traversable); an
/// unreachable or out-of-bounds target degenerates to a one-tick no-op.
/// Counts one decision step. Returns the installed primitive.
const Primitive& begin_primitive(WorldState& world, int agent_id, int channel, CellCoord target,
                                 const OccupancyGrid& belief);

/// Advances every in-flight primitive by one path cell and resolves the
/// outcome: obstacle and agent collisions (same-target and swap conflicts
/// stop both parties), object pushing, end-effector actions at path ends,
/// rescue-by-contact, receptacle removals, and distance-shaping rewards.
/// Total: never throws on any world state.
TickResult tick(WorldState& world);

/// True when every object is removed or no object has been removed for
/// spec.no_progress_limit decision steps (summed across agents).
bool is_episode_done(const WorldState& world);

}  // namespace intentsim::env
