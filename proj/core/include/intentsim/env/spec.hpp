#pragma once

#include <string>
#include <vector>

#include "intentsim/env/types.hpp"

namespace intentsim::env {

enum class Layout : uint8_t {
  SmallEmpty,
  SmallDivider,
  LargeEmpty,
  LargeDoors,
  LargeTunnels,
  LargeRooms,
};

enum class Task : uint8_t { Foraging, SearchAndRescue };

const char* to_string(Layout layout);
const char* to_string(Task task);
Layout layout_from_string(const std::string& s);
Task task_from_string(const std::string& s);

bool is_large(Layout layout);

/// Layouts where robots and objects start on opposite sides of the central
/// obstacle, so every object has to come through an opening.
bool opposite_side_start(Layout layout);

struct EnvironmentSpec {
  Layout layout = Layout::SmallEmpty;
  Task task = Task::Foraging;
  int interior_width = 0;   // 0 = default for the layout size class
  int interior_height = 0;
  int num_objects = 0;      // 0 = default (10 small / 20 large)
  std::vector<RobotKind> team;

  double shaping_kappa = 0.01;
  double effector_radius = 1.5;
  double throw_range = 10.0;
  int no_progress_limit = 400;  // decision steps without a removal

  /// Fills zero-valued dims/object counts with the layout defaults.
  EnvironmentSpec resolved() const;

  void validate() const;
};

/// Team composition strings: "4L", "2L+2P", "1R", ... with L/P/T/R kinds.
std::vector<RobotKind> parse_team(const std::string& s);
std::string team_to_string(const std::vector<RobotKind>& team);

/// JSON document form (keys: layout, task, dims, num_objects, team, kappa,
/// effector_radius, throw_range, no_progress_limit).
EnvironmentSpec environment_spec_from_json(const std::string& json_text);
std::string environment_spec_to_json(const EnvironmentSpec& spec);

/// Ground-truth world; single writer (begin_primitive / tick).
struct WorldState {
  EnvironmentSpec spec;
  OccupancyGrid grid;  // includes the boundary wall ring
  CellRect receptacle;
  std::vector<AgentState> agents;
  std::vector<ObjectState> objects;
  int64_t tick = 0;
  int64_t steps_since_progress = 0;

  /// Shortest-path distances to the receptacle on the ground-truth grid,
  /// cached at generation time for distance shaping (foraging only).
  ScalarMap receptacle_field;

  int objects_remaining() const {
    int n = 0;
    for (const ObjectState& o : objects) n += o.removed ? 0 : 1;
    return n;
  }
};

}  // namespace intentsim::env
