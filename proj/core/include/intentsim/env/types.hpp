#pragma once

#include <optional>
#include <vector>

#include "intentsim/grid/types.hpp"

namespace intentsim::env {

using grid::CellCoord;
using grid::OccupancyGrid;
using grid::Pose;
using grid::ScalarMap;

enum class RobotKind : uint8_t { Lifting, Pushing, Throwing, Rescue };

/// Spatial action channels per robot kind: channel 0 is "move to cell",
/// channel 1 (lifting, throwing) adds an end-effector action at the target.
inline int action_channels(RobotKind kind) {
  switch (kind) {
    case RobotKind::Lifting:
    case RobotKind::Throwing: return 2;
    case RobotKind::Pushing:
    case RobotKind::Rescue: return 1;
  }
  return 1;
}

const char* to_string(RobotKind kind);

/// A committed high-level action: travel along `path` one cell per tick,
/// then optionally actuate the end effector at the final cell.
struct Primitive {
  int channel = 0;
  std::vector<CellCoord> path;  // path[0] is the cell the agent started in
  size_t next_index = 1;        // next path cell to step into
  bool actuate = false;

  bool arrived() const { return next_index >= path.size(); }
};

struct AgentState {
  int id = 0;
  RobotKind kind = RobotKind::Lifting;
  Pose pose;
  bool carrying = false;
  int carried_object = -1;
  std::optional<Primitive> primitive;  // nullopt while idle

  CellCoord cell() const { return grid::cell_of(pose); }
  bool idle() const { return !primitive.has_value(); }
};

struct ObjectState {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
  bool removed = false;
  int carried_by = -1;

  CellCoord cell() const { return grid::cell_of(x, y); }
  bool interactable() const { return !removed && carried_by < 0; }
};

enum class RewardKind : uint8_t {
  Success,
  ObstacleCollision,
  AgentCollision,
  DistanceShaping,
  DropOutside,
};

const char* to_string(RewardKind kind);

inline constexpr double kSuccessReward = 1.0;
inline constexpr double kObstacleCollisionPenalty = -0.25;
inline constexpr double kAgentCollisionPenalty = -1.0;
inline constexpr double kDropOutsidePenalty = -0.25;

struct RewardEvent {
  int64_t tick = 0;
  int agent_id = 0;
  RewardKind kind = RewardKind::Success;
  double magnitude = 0.0;
};

/// Inclusive cell rectangle, used for the receptacle region.
struct CellRect {
  int col0 = 0, row0 = 0, col1 = -1, row1 = -1;

  bool empty() const { return col1 < col0 || row1 < row0; }
  bool contains(CellCoord c) const {
    return c.col >= col0 && c.col <= col1 && c.row >= row0 && c.row <= row1;
  }
  std::vector<CellCoord> cells() const {
    std::vector<CellCoord> out;
    for (int r = row0; r <= row1; ++r)
      for (int c = col0; c <= col1; ++c) out.push_back({c, r});
    return out;
  }
};

}  // namespace intentsim::env
