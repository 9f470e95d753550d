#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "intentsim/env/dynamics.hpp"
#include "intentsim/env/generate.hpp"
#include "intentsim/env/spec.hpp"
#include "intentsim/grid/distance.hpp"

namespace env = intentsim::env;
namespace g = intentsim::grid;
using env::EnvironmentSpec;
using env::Layout;
using env::RewardKind;
using env::RobotKind;
using env::Task;
using env::WorldState;
using g::Cell;
using g::CellCoord;

namespace {

EnvironmentSpec small_empty_spec(const std::string& team = "4L") {
  EnvironmentSpec spec;
  spec.layout = Layout::SmallEmpty;
  spec.task = Task::Foraging;
  spec.team = env::parse_team(team);
  return spec;
}

// Hand-built world on an empty WxH interior: boundary ring, no interior
// obstacles, receptacle in the upper-right (foraging), entities as given.
WorldState scripted_world(int interior_w, int interior_h, Task task,
                          const std::vector<std::pair<RobotKind, CellCoord>>& agents,
                          const std::vector<CellCoord>& objects) {
  WorldState w;
  w.spec.layout = Layout::SmallEmpty;
  w.spec.task = task;
  w.spec.interior_width = interior_w;
  w.spec.interior_height = interior_h;
  w.spec.num_objects = int(objects.size());
  for (auto& [kind, cell] : agents) w.spec.team.push_back(kind);

  int W = interior_w + 2, H = interior_h + 2;
  w.grid = g::OccupancyGrid(W, H, Cell::Free);
  for (int c = 0; c < W; ++c) {
    w.grid.set(c, 0, Cell::Obstacle);
    w.grid.set(c, H - 1, Cell::Obstacle);
  }
  for (int r = 0; r < H; ++r) {
    w.grid.set(0, r, Cell::Obstacle);
    w.grid.set(W - 1, r, Cell::Obstacle);
  }
  if (task == Task::Foraging) {
    w.receptacle = env::CellRect{W - 4, H - 4, W - 2, H - 2};
    w.receptacle_field = g::distance_field(w.grid, w.receptacle.cells(), false);
  }
  int id = 0;
  for (auto& [kind, cell] : agents) {
    env::AgentState a;
    a.id = id++;
    a.kind = kind;
    a.pose = {cell.col + 0.5, cell.row + 0.5, M_PI / 2.0};
    w.agents.push_back(a);
  }
  id = 0;
  for (const CellCoord& cell : objects) {
    env::ObjectState o;
    o.id = id++;
    o.x = cell.col + 0.5;
    o.y = cell.row + 0.5;
    w.objects.push_back(o);
  }
  return w;
}

// All-Free belief with the world's dimensions: scripted tests plan on
// ground-truth-like maps unless they say otherwise.
g::OccupancyGrid open_belief(const WorldState& w) {
  return g::OccupancyGrid(w.grid.width(), w.grid.height(), Cell::Free);
}

int count_events(const std::vector<env::RewardEvent>& events, RewardKind kind) {
  int n = 0;
  for (const auto& e : events) n += e.kind == kind ? 1 : 0;
  return n;
}

double sum_for_agent(const std::vector<env::RewardEvent>& events, int agent) {
  double s = 0.0;
  for (const auto& e : events)
    if (e.agent_id == agent) s += e.magnitude;
  return s;
}

}  // namespace

TEST(GenerateEnvironment, SmallEmptyDefaults) {
  WorldState w = env::generate_environment(small_empty_spec(), 7);
  EXPECT_EQ(w.objects.size(), 10u);
  EXPECT_EQ(w.agents.size(), 4u);
  EXPECT_EQ(w.grid.width(), 22);
  EXPECT_EQ(w.grid.height(), 22);
  // No interior obstacles beyond the boundary ring.
  for (int r = 1; r <= 20; ++r)
    for (int c = 1; c <= 20; ++c) EXPECT_EQ(w.grid.at(c, r), Cell::Free);
  // Receptacle occupies the 3x3 upper-right interior corner.
  EXPECT_TRUE(w.receptacle.contains({18, 18}));
  EXPECT_TRUE(w.receptacle.contains({20, 20}));
  EXPECT_FALSE(w.receptacle.contains({17, 20}));
  // Entities in free cells, no overlaps, objects outside the receptacle.
  std::set<std::pair<int, int>> used;
  for (const auto& a : w.agents) {
    EXPECT_TRUE(used.insert({a.cell().col, a.cell().row}).second);
    EXPECT_EQ(w.grid.at(a.cell()), Cell::Free);
  }
  for (const auto& o : w.objects) {
    EXPECT_TRUE(used.insert({o.cell().col, o.cell().row}).second);
    EXPECT_FALSE(w.receptacle.contains(o.cell()));
  }
}

TEST(GenerateEnvironment, DeterministicInSpecAndSeed) {
  EnvironmentSpec spec = small_empty_spec("2L+2P");
  WorldState a = env::generate_environment(spec, 123);
  WorldState b = env::generate_environment(spec, 123);
  ASSERT_EQ(a.agents.size(), b.agents.size());
  for (size_t i = 0; i < a.agents.size(); ++i) {
    EXPECT_EQ(a.agents[i].pose.x, b.agents[i].pose.x);
    EXPECT_EQ(a.agents[i].pose.y, b.agents[i].pose.y);
    EXPECT_EQ(a.agents[i].pose.heading, b.agents[i].pose.heading);
    EXPECT_EQ(a.agents[i].kind, b.agents[i].kind);
  }
  for (size_t i = 0; i < a.objects.size(); ++i) {
    EXPECT_EQ(a.objects[i].x, b.objects[i].x);
    EXPECT_EQ(a.objects[i].y, b.objects[i].y);
  }
  EXPECT_TRUE(a.grid == b.grid);
}

TEST(GenerateEnvironment, SmallDividerSeparatesSidesWithOpening) {
  EnvironmentSpec spec = small_empty_spec("4L");
  spec.layout = Layout::SmallDivider;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    WorldState w = env::generate_environment(spec, seed);
    // Locate the divider row: an interior row with many obstacles.
    int divider = -1;
    for (int r = 1; r <= 20; ++r) {
      int walls = 0;
      for (int c = 1; c <= 20; ++c) walls += w.grid.at(c, r) == Cell::Obstacle ? 1 : 0;
      if (walls > 10) divider = r;
    }
    ASSERT_GT(divider, 0) << "seed " << seed;
    for (const auto& a : w.agents) EXPECT_GT(a.cell().row, divider) << "seed " << seed;
    for (const auto& o : w.objects) EXPECT_LT(o.cell().row, divider) << "seed " << seed;
    // A connecting opening exists: objects are reachable from every agent.
    for (const auto& a : w.agents) {
      auto d = g::distance_field(w.grid, {a.cell()}, false);
      for (const auto& o : w.objects)
        EXPECT_NE(d.at(o.cell()), g::ScalarMap::kUnreachable) << "seed " << seed;
    }
  }
}

TEST(GenerateEnvironment, LargeLayoutsAreValid) {
  for (Layout layout : {Layout::LargeEmpty, Layout::LargeDoors, Layout::LargeTunnels,
                        Layout::LargeRooms}) {
    EnvironmentSpec spec = small_empty_spec("2L+2T");
    spec.layout = layout;
    WorldState w = env::generate_environment(spec, 42);
    EXPECT_EQ(w.grid.width(), 42);
    EXPECT_EQ(w.grid.height(), 22);
    EXPECT_EQ(w.objects.size(), 20u);
    for (const auto& a : w.agents) {
      auto d = g::distance_field(w.grid, {a.cell()}, false);
      for (const auto& o : w.objects)
        EXPECT_NE(d.at(o.cell()), g::ScalarMap::kUnreachable) << to_string(layout);
    }
  }
}

TEST(GenerateEnvironment, TooManyEntitiesIsGenerationError) {
  EnvironmentSpec spec = small_empty_spec("4L");
  spec.interior_width = 4;
  spec.interior_height = 4;
  spec.num_objects = 30;
  EXPECT_THROW(env::generate_environment(spec, 1), std::runtime_error);
}

TEST(GenerateEnvironment, RescueTeamRequiresRescueTask) {
  EnvironmentSpec spec = small_empty_spec("4R");
  EXPECT_THROW(env::generate_environment(spec, 1), std::invalid_argument);
  spec.task = Task::SearchAndRescue;
  WorldState w = env::generate_environment(spec, 1);
  EXPECT_TRUE(w.receptacle.empty());
}

TEST(BeginPrimitive, MinimalMoveForPushingRobot) {
  WorldState w = scripted_world(8, 8, Task::Foraging, {{RobotKind::Pushing, {3, 3}}}, {});
  auto belief = open_belief(w);
  const env::Primitive& p = env::begin_primitive(w, 0, 0, {4, 3}, belief);
  ASSERT_EQ(p.path.size(), 2u);
  EXPECT_EQ(p.path[0], (CellCoord{3, 3}));
  EXPECT_EQ(p.path[1], (CellCoord{4, 3}));
  EXPECT_FALSE(p.actuate);
  EXPECT_EQ(w.steps_since_progress, 1);
}

TEST(BeginPrimitive, LiftChannelEndsInActuation) {
  WorldState w =
      scripted_world(8, 8, Task::Foraging, {{RobotKind::Lifting, {2, 2}}}, {{5, 2}});
  auto belief = open_belief(w);
  const env::Primitive& p = env::begin_primitive(w, 0, 1, {4, 2}, belief);
  EXPECT_TRUE(p.actuate);
  EXPECT_EQ(p.path.back(), (CellCoord{4, 2}));
}

TEST(BeginPrimitive, BelievedObstacleTargetDegeneratesToNoop) {
  WorldState w = scripted_world(8, 8, Task::Foraging, {{RobotKind::Lifting, {2, 2}}}, {});
  auto belief = open_belief(w);
  belief.set(6, 6, Cell::Obstacle);
  const env::Primitive& p = env::begin_primitive(w, 0, 1, {6, 6}, belief);
  EXPECT_EQ(p.path.size(), 1u);
  EXPECT_EQ(p.path[0], (CellCoord{2, 2}));
  EXPECT_FALSE(p.actuate);  // no-op, not an actuation at the current cell
  // The primitive ends the decision step after one tick.
  auto res = env::tick(w);
  ASSERT_EQ(res.terminations.size(), 1u);
  EXPECT_EQ(res.terminations[0].reason, env::PrimitiveEnd::Completed);
  EXPECT_TRUE(w.agents[0].idle());
}

TEST(BeginPrimitive, WrongChannelRejected) {
  WorldState w = scripted_world(8, 8, Task::Foraging, {{RobotKind::Pushing, {2, 2}}}, {});
  auto belief = open_belief(w);
  EXPECT_THROW(env::begin_primitive(w, 0, 1, {4, 4}, belief), std::invalid_argument);
}

TEST(Tick, CarriedDropInsideReceptacleScoresSuccess) {
  // Lifting agent one cell left of the receptacle, carrying object 0.
  WorldState w =
      scripted_world(8, 8, Task::Foraging, {{RobotKind::Lifting, {5, 7}}}, {{5, 7}});
  w.agents[0].carrying = true;
  w.agents[0].carried_object = 0;
  w.objects[0].carried_by = 0;
  auto belief = open_belief(w);
  // Move into the receptacle (rows 6..8 cols 6..8 for a 8x8 interior), drop.
  ASSERT_FALSE(w.receptacle.contains({5, 7}));
  env::begin_primitive(w, 0, 1, {6, 7}, belief);
  ASSERT_TRUE(w.receptacle.contains({6, 7}));
  auto r1 = env::tick(w);
  EXPECT_EQ(count_events(r1.events, RewardKind::Success), 1);
  EXPECT_EQ(sum_for_agent(r1.events, 0), env::kSuccessReward + w.spec.shaping_kappa * 1.0);
  EXPECT_TRUE(w.objects[0].removed);
  EXPECT_FALSE(w.agents[0].carrying);
  EXPECT_EQ(w.steps_since_progress, 0);
}

TEST(Tick, DropOutsideReceptaclePenalized) {
  WorldState w =
      scripted_world(8, 8, Task::Foraging, {{RobotKind::Lifting, {3, 3}}}, {{3, 3}});
  w.agents[0].carrying = true;
  w.agents[0].carried_object = 0;
  w.objects[0].carried_by = 0;
  auto belief = open_belief(w);
  env::begin_primitive(w, 0, 1, {3, 3}, belief);  // drop in place
  auto r = env::tick(w);
  EXPECT_EQ(count_events(r.events, RewardKind::DropOutside), 1);
  EXPECT_DOUBLE_EQ(sum_for_agent(r.events, 0), env::kDropOutsidePenalty);
  EXPECT_FALSE(w.objects[0].removed);
  EXPECT_FALSE(w.agents[0].carrying);
}

TEST(Tick, LiftPicksNearestObjectWithinRadius) {
  WorldState w = scripted_world(8, 8, Task::Foraging, {{RobotKind::Lifting, {4, 4}}},
                                {{6, 4}, {5, 4}, {4, 7}});
  auto belief = open_belief(w);
  env::begin_primitive(w, 0, 1, {4, 4}, belief);
  env::tick(w);
  EXPECT_TRUE(w.agents[0].carrying);
  EXPECT_EQ(w.agents[0].carried_object, 1);  // (5,4) is 1.0 away, (6,4) is 2.0
  EXPECT_EQ(w.objects[1].carried_by, 0);
  // (4,7) at distance 3 was out of effector range.
  EXPECT_FALSE(w.objects[2].removed);
}

TEST(Tick, SwapStepCollidesBothAgents) {
  WorldState w = scripted_world(8, 8, Task::Foraging,
                                {{RobotKind::Lifting, {3, 3}}, {RobotKind::Lifting, {4, 3}}},
                                {});
  auto belief = open_belief(w);
  env::begin_primitive(w, 0, 0, {4, 3}, belief);
  env::begin_primitive(w, 1, 0, {3, 3}, belief);
  auto r = env::tick(w);
  EXPECT_EQ(count_events(r.events, RewardKind::AgentCollision), 2);
  EXPECT_DOUBLE_EQ(sum_for_agent(r.events, 0), env::kAgentCollisionPenalty);
  EXPECT_DOUBLE_EQ(sum_for_agent(r.events, 1), env::kAgentCollisionPenalty);
  // Neither moved; both primitives terminated.
  EXPECT_EQ(w.agents[0].cell(), (CellCoord{3, 3}));
  EXPECT_EQ(w.agents[1].cell(), (CellCoord{4, 3}));
  EXPECT_TRUE(w.agents[0].idle());
  EXPECT_TRUE(w.agents[1].idle());
}

TEST(Tick, SameTargetCollidesBothAgents) {
  WorldState w = scripted_world(8, 8, Task::Foraging,
                                {{RobotKind::Lifting, {3, 3}}, {RobotKind::Lifting, {5, 3}}},
                                {});
  auto belief = open_belief(w);
  env::begin_primitive(w, 0, 0, {4, 3}, belief);
  env::begin_primitive(w, 1, 0, {4, 3}, belief);
  auto r = env::tick(w);
  EXPECT_EQ(count_events(r.events, RewardKind::AgentCollision), 2);
  EXPECT_EQ(w.agents[0].cell(), (CellCoord{3, 3}));
  EXPECT_EQ(w.agents[1].cell(), (CellCoord{5, 3}));
}

TEST(Tick, FollowChainAdvancesWithoutCollision) {
  WorldState w = scripted_world(8, 8, Task::Foraging,
                                {{RobotKind::Lifting, {4, 3}}, {RobotKind::Lifting, {3, 3}}},
                                {});
  auto belief = open_belief(w);
  env::begin_primitive(w, 0, 0, {6, 3}, belief);  // leader (higher cell)
  env::begin_primitive(w, 1, 0, {4, 3}, belief);  // follower steps into vacated cell
  auto r = env::tick(w);
  EXPECT_EQ(count_events(r.events, RewardKind::AgentCollision), 0);
  EXPECT_EQ(w.agents[0].cell(), (CellCoord{5, 3}));
  EXPECT_EQ(w.agents[1].cell(), (CellCoord{4, 3}));
}

TEST(Tick, MovingIntoStationaryAgentCollides) {
  WorldState w = scripted_world(8, 8, Task::Foraging,
                                {{RobotKind::Lifting, {3, 3}}, {RobotKind::Lifting, {4, 3}}},
                                {});
  auto belief = open_belief(w);
  env::begin_primitive(w, 0, 0, {4, 3}, belief);  // agent 1 stays idle
  auto r = env::tick(w);
  EXPECT_EQ(count_events(r.events, RewardKind::AgentCollision), 2);
  EXPECT_EQ(w.agents[0].cell(), (CellCoord{3, 3}));
  EXPECT_TRUE(w.agents[0].idle());
}

TEST(Tick, ObstacleCollisionFromOptimisticBelief) {
  WorldState w = scripted_world(8, 8, Task::Foraging, {{RobotKind::Lifting, {3, 3}}}, {});
  w.grid.set(4, 3, Cell::Obstacle);  // ground truth the agent has not seen
  auto belief = open_belief(w);
  env::begin_primitive(w, 0, 0, {5, 3}, belief);
  auto r = env::tick(w);
  EXPECT_EQ(count_events(r.events, RewardKind::ObstacleCollision), 1);
  EXPECT_DOUBLE_EQ(sum_for_agent(r.events, 0), env::kObstacleCollisionPenalty);
  EXPECT_EQ(w.agents[0].cell(), (CellCoord{3, 3}));
  ASSERT_EQ(r.terminations.size(), 1u);
  EXPECT_EQ(r.terminations[0].reason, env::PrimitiveEnd::ObstacleCollision);
}

TEST(Tick, PushDisplacesObjectAndEmitsShaping) {
  // Pushing east, one axial cell closer to the receptacle.
  WorldState w =
      scripted_world(8, 8, Task::Foraging, {{RobotKind::Pushing, {3, 7}}}, {{4, 7}});
  auto belief = open_belief(w);
  env::begin_primitive(w, 0, 0, {4, 7}, belief);
  auto r = env::tick(w);
  EXPECT_EQ(w.agents[0].cell(), (CellCoord{4, 7}));
  EXPECT_EQ(w.objects[0].cell(), (CellCoord{5, 7}));
  ASSERT_EQ(count_events(r.events, RewardKind::DistanceShaping), 1);
  // Receptacle spans cols 6..8 rows 6..8; from (4,7) row 7 the distance is
  // axial, so one east push is exactly one cell of progress.
  EXPECT_DOUBLE_EQ(sum_for_agent(r.events, 0), 0.01);
}

TEST(Tick, PushIntoWallBlocksAndTerminates) {
  WorldState w =
      scripted_world(8, 8, Task::Foraging, {{RobotKind::Pushing, {7, 4}}}, {{8, 4}});
  auto belief = open_belief(w);
  env::begin_primitive(w, 0, 0, {8, 4}, belief);  // object against the east wall
  auto r = env::tick(w);
  EXPECT_EQ(w.agents[0].cell(), (CellCoord{7, 4}));
  EXPECT_EQ(w.objects[0].cell(), (CellCoord{8, 4}));
  ASSERT_EQ(r.terminations.size(), 1u);
  EXPECT_EQ(r.terminations[0].reason, env::PrimitiveEnd::PushBlocked);
  EXPECT_TRUE(r.events.empty());  // blocked push carries no penalty
}

TEST(Tick, PushIntoReceptacleRemovesObject) {
  WorldState w =
      scripted_world(8, 8, Task::Foraging, {{RobotKind::Pushing, {4, 7}}}, {{5, 7}});
  auto belief = open_belief(w);
  env::begin_primitive(w, 0, 0, {5, 7}, belief);
  auto r = env::tick(w);
  EXPECT_TRUE(w.objects[0].removed);
  EXPECT_EQ(count_events(r.events, RewardKind::Success), 1);
}

TEST(Tick, ThrowSendsObjectBackwardUntilObstacle) {
  WorldState w =
      scripted_world(12, 8, Task::Foraging, {{RobotKind::Throwing, {8, 4}}}, {{8, 5}});
  auto belief = open_belief(w);
  env::begin_primitive(w, 0, 1, {8, 4}, belief);  // actuate in place
  // Heading after a stationary actuation stays pi/2 (up); backwards is down.
  auto r = env::tick(w);
  // Object flies from (8,5) downward and stops before the boundary row 0.
  EXPECT_EQ(w.objects[0].cell(), (CellCoord{8, 1}));
  EXPECT_EQ(count_events(r.events, RewardKind::DistanceShaping), 1);
  ASSERT_EQ(r.terminations.size(), 1u);
  EXPECT_EQ(r.terminations[0].reason, env::PrimitiveEnd::Completed);
}

TEST(Tick, RescueRemovesOnContact) {
  WorldState w = scripted_world(8, 8, Task::SearchAndRescue,
                                {{RobotKind::Rescue, {3, 3}}}, {{4, 4}, {7, 7}});
  auto belief = open_belief(w);
  env::begin_primitive(w, 0, 0, {3, 3}, belief);  // no movement needed
  auto r = env::tick(w);
  EXPECT_TRUE(w.objects[0].removed);  // sqrt(2) away: contact
  EXPECT_FALSE(w.objects[1].removed);
  EXPECT_EQ(count_events(r.events, RewardKind::Success), 1);
  EXPECT_EQ(w.steps_since_progress, 0);
}

TEST(Tick, ObjectCountConservation) {
  WorldState w = scripted_world(8, 8, Task::SearchAndRescue, {{RobotKind::Rescue, {2, 2}}},
                                {{4, 2}, {6, 2}, {8, 2}});
  auto belief = open_belief(w);
  for (int step = 0; step < 10 && !env::is_episode_done(w); ++step) {
    if (w.agents[0].idle()) env::begin_primitive(w, 0, 0, {8, 2}, belief);
    env::tick(w);
    int removed = 0;
    for (const auto& o : w.objects) removed += o.removed ? 1 : 0;
    EXPECT_EQ(removed + w.objects_remaining(), 3);
    EXPECT_NE(w.grid.at(w.agents[0].cell()), Cell::Obstacle);
  }
  EXPECT_TRUE(env::is_episode_done(w));
}

TEST(EpisodeDone, NoProgressCutoff) {
  WorldState w = scripted_world(8, 8, Task::Foraging, {{RobotKind::Lifting, {3, 3}}}, {{6, 6}});
  EXPECT_FALSE(env::is_episode_done(w));  // fresh world
  w.steps_since_progress = 399;
  EXPECT_FALSE(env::is_episode_done(w));
  w.steps_since_progress = 400;
  EXPECT_TRUE(env::is_episode_done(w));
  w.steps_since_progress = 0;
  for (auto& o : w.objects) o.removed = true;
  EXPECT_TRUE(env::is_episode_done(w));
}

TEST(Tick, DeterministicEventLog) {
  EnvironmentSpec spec = small_empty_spec("2L+2P");
  auto run = [&]() {
    WorldState w = env::generate_environment(spec, 99);
    auto belief = open_belief(w);
    std::vector<env::RewardEvent> log;
    std::mt19937 rng(5);
    for (int t = 0; t < 60; ++t) {
      for (auto& a : w.agents)
        if (a.idle()) {
          std::uniform_int_distribution<int> uc(1, w.grid.width() - 2);
          CellCoord target{uc(rng), uc(rng)};
          env::begin_primitive(w, a.id, 0, target, belief);
        }
      auto r = env::tick(w);
      log.insert(log.end(), r.events.begin(), r.events.end());
    }
    return log;
  };
  auto a = run(), b = run();
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].tick, b[i].tick);
    EXPECT_EQ(a[i].agent_id, b[i].agent_id);
    EXPECT_EQ(a[i].kind, b[i].kind);
    EXPECT_EQ(a[i].magnitude, b[i].magnitude);
  }
}
