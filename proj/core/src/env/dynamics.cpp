#include "intentsim/env/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "intentsim/grid/distance.hpp"

namespace intentsim::env {

namespace {

using grid::Cell;

double cell_center_dist(CellCoord c, double x, double y) {
  return std::hypot(c.col + 0.5 - x, c.row + 0.5 - y);
}

struct Mover {
  bool moving = false;
  CellCoord target;      // next path cell while moving, own cell otherwise
  bool collided = false; // already received an agent-collision this tick
};

}  // namespace

const Primitive& begin_primitive(WorldState& world, int agent_id, int channel, CellCoord target,
                                 const OccupancyGrid& belief) {
  if (agent_id < 0 || size_t(agent_id) >= world.agents.size())
    throw std::invalid_argument("begin_primitive: bad agent id");
  AgentState& agent = world.agents[size_t(agent_id)];
  if (!agent.idle()) throw std::invalid_argument("begin_primitive: agent already has a primitive");
  if (channel < 0 || channel >= action_channels(agent.kind))
    throw std::invalid_argument("begin_primitive: robot kind lacks this action channel");

  world.steps_since_progress++;  // a decision step, progress or not

  Primitive prim;
  prim.channel = channel;
  prim.actuate = channel == 1;
  if (belief.in_bounds(target)) {
    auto path = grid::shortest_path(belief, agent.cell(), target, /*traversable_unknown=*/true);
    if (path.has_value()) prim.path = std::move(*path);
  }
  if (prim.path.empty()) {
    // Unreachable in the agent's own map: one-tick no-op ending the step.
    prim.path = {agent.cell()};
    prim.actuate = false;
  }
  prim.next_index = 1;
  agent.primitive = std::move(prim);
  return *agent.primitive;
}

bool is_episode_done(const WorldState& world) {
  if (world.objects_remaining() == 0) return true;
  return world.steps_since_progress >= world.spec.no_progress_limit;
}

namespace {

struct TickContext {
  WorldState& world;
  TickResult& result;

  void emit(int agent_id, RewardKind kind, double magnitude) {
    result.events.push_back({world.tick, agent_id, kind, magnitude});
  }

  void remove_object(ObjectState& obj, int responsible_agent) {
    obj.removed = true;
    obj.carried_by = -1;
    result.removed_objects.push_back(obj.id);
    world.steps_since_progress = 0;
    emit(responsible_agent, RewardKind::Success, kSuccessReward);
  }

  // kappa * (distance-to-receptacle decrease), on the ground-truth field.
  void emit_shaping(int agent_id, CellCoord before, CellCoord after) {
    if (world.spec.task != Task::Foraging || world.receptacle.empty()) return;
    if (before == after) return;
    float d0 = world.receptacle_field.at(before);
    float d1 = world.receptacle_field.at(after);
    if (d0 == grid::ScalarMap::kUnreachable || d1 == grid::ScalarMap::kUnreachable) return;
    emit(agent_id, RewardKind::DistanceShaping, world.spec.shaping_kappa * (double(d0) - d1));
  }

  void terminate(AgentState& agent, PrimitiveEnd reason) {
    agent.primitive.reset();
    result.terminations.push_back({agent.id, reason});
  }

  // Displaces an object one cell (push) or along a throw line; handles
  // shaping and receptacle removal. Returns false if the object stayed put.
  bool displace_object(ObjectState& obj, CellCoord to, int agent_id) {
    CellCoord from = obj.cell();
    if (to == from) return false;
    obj.x = to.col + 0.5;
    obj.y = to.row + 0.5;
    emit_shaping(agent_id, from, to);
    if (world.receptacle.contains(to)) remove_object(obj, agent_id);
    return true;
  }

  ObjectState* nearest_interactable(double x, double y, double radius) {
    ObjectState* best = nullptr;
    double best_d = 0.0;
    for (ObjectState& o : world.objects) {  // id order, so ties keep the lowest id
      if (!o.interactable()) continue;
      double d = std::hypot(o.x - x, o.y - y);
      if (d <= radius && (!best || d < best_d)) {
        best = &o;
        best_d = d;
      }
    }
    return best;
  }
};

void resolve_effector(TickContext& ctx, AgentState& agent) {
  WorldState& world = ctx.world;
  CellCoord cell = agent.cell();
  double cx = cell.col + 0.5, cy = cell.row + 0.5;

  switch (agent.kind) {
    case RobotKind::Lifting: {
      if (!agent.carrying) {
        ObjectState* obj = ctx.nearest_interactable(cx, cy, world.spec.effector_radius);
        if (obj) {
          obj->carried_by = agent.id;
          obj->x = cx;
          obj->y = cy;
          agent.carrying = true;
          agent.carried_object = obj->id;
        }
      } else {
        ObjectState& obj = world.objects[size_t(agent.carried_object)];
        obj.carried_by = -1;
        obj.x = cx;
        obj.y = cy;
        agent.carrying = false;
        agent.carried_object = -1;
        if (world.receptacle.contains(cell))
          ctx.remove_object(obj, agent.id);
        else
          ctx.emit(agent.id, RewardKind::DropOutside, kDropOutsidePenalty);
      }
      break;
    }
    case RobotKind::Throwing: {
      ObjectState* obj = ctx.nearest_interactable(cx, cy, world.spec.effector_radius);
      if (!obj) break;
      // Backwards throw: march away from the heading, stop before the first
      // obstacle, land at most throw_range cells out.
      double dx = std::cos(agent.pose.heading + M_PI);
      double dy = std::sin(agent.pose.heading + M_PI);
      CellCoord land = obj->cell();
      for (double t = 0.25; t <= world.spec.throw_range; t += 0.25) {
        CellCoord c = grid::cell_of(obj->x + t * dx, obj->y + t * dy);
        if (!world.grid.in_bounds(c) || world.grid.at(c) == Cell::Obstacle) break;
        land = c;
      }
      ctx.displace_object(*obj, land, agent.id);
      break;
    }
    case RobotKind::Pushing:
    case RobotKind::Rescue:
      break;  // no channel-1 effector
  }
}

}  // namespace

TickResult tick(WorldState& world) {
  TickResult result;
  TickContext ctx{world, result};
  const size_t n = world.agents.size();

  // Movement intents for this tick.
  std::vector<Mover> movers(n);
  for (size_t i = 0; i < n; ++i) {
    AgentState& a = world.agents[i];
    movers[i].target = a.cell();
    if (a.primitive && !a.primitive->arrived()) {
      movers[i].moving = true;
      movers[i].target = a.primitive->path[a.primitive->next_index];
    }
  }

  // Ground-truth obstacles stop a move immediately (the belief plan was
  // optimistic about Unknown space).
  for (size_t i = 0; i < n; ++i) {
    AgentState& a = world.agents[i];
    if (!movers[i].moving) continue;
    if (world.grid.at(movers[i].target) == Cell::Obstacle) {
      ctx.emit(a.id, RewardKind::ObstacleCollision, kObstacleCollisionPenalty);
      ctx.terminate(a, PrimitiveEnd::ObstacleCollision);
      movers[i].moving = false;
      movers[i].target = a.cell();
    }
  }

  // A pushing robot can be stopped by an immovable object.
  for (size_t i = 0; i < n; ++i) {
    AgentState& a = world.agents[i];
    if (!movers[i].moving || a.kind != RobotKind::Pushing) continue;
    CellCoord from = a.cell(), to = movers[i].target;
    CellCoord dest{to.col + (to.col - from.col), to.row + (to.row - from.row)};
    bool any_object = false;
    for (ObjectState& o : world.objects)
      any_object = any_object || (o.interactable() && o.cell() == to);
    if (any_object &&
        (!world.grid.in_bounds(dest) || world.grid.at(dest) == Cell::Obstacle)) {
      ctx.terminate(a, PrimitiveEnd::PushBlocked);
      movers[i].moving = false;
      movers[i].target = a.cell();
    }
  }

  // Same-target and swap conflicts; iterate because a stopped agent becomes
  // a stationary target for anyone headed at its cell.
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        if (!movers[i].moving && !movers[j].moving) continue;
        bool same_target = movers[i].target == movers[j].target;
        bool swap = movers[i].moving && movers[j].moving &&
                    movers[i].target == world.agents[j].cell() &&
                    movers[j].target == world.agents[i].cell();
        if (!same_target && !swap) continue;
        for (size_t k : {i, j}) {
          if (!movers[k].collided) {
            movers[k].collided = true;
            ctx.emit(world.agents[k].id, RewardKind::AgentCollision, kAgentCollisionPenalty);
          }
          if (movers[k].moving) {
            ctx.terminate(world.agents[k], PrimitiveEnd::AgentCollision);
            movers[k].moving = false;
            movers[k].target = world.agents[k].cell();
            changed = true;
          }
        }
      }
    }
  }

  // Apply the surviving moves in id order.
  for (size_t i = 0; i < n; ++i) {
    if (!movers[i].moving) continue;
    AgentState& a = world.agents[i];
    CellCoord from = a.cell(), to = movers[i].target;

    if (a.kind == RobotKind::Pushing) {
      CellCoord dest{to.col + (to.col - from.col), to.row + (to.row - from.row)};
      for (ObjectState& o : world.objects)
        if (o.interactable() && o.cell() == to) ctx.displace_object(o, dest, a.id);
    }

    a.pose.x = to.col + 0.5;
    a.pose.y = to.row + 0.5;
    a.pose.heading =
        grid::wrap_angle(std::atan2(double(to.row - from.row), double(to.col - from.col)));
    a.primitive->next_index++;

    if (a.carrying) {
      ObjectState& obj = world.objects[size_t(a.carried_object)];
      CellCoord obj_from = obj.cell();
      obj.x = a.pose.x;
      obj.y = a.pose.y;
      ctx.emit_shaping(a.id, obj_from, to);
    }
  }

  // Path ends: actuate and complete.
  for (size_t i = 0; i < n; ++i) {
    AgentState& a = world.agents[i];
    if (!a.primitive || !a.primitive->arrived()) continue;
    if (a.primitive->actuate) resolve_effector(ctx, a);
    ctx.terminate(a, PrimitiveEnd::Completed);
  }

  // Rescue robots remove anything they touch, every tick.
  for (size_t i = 0; i < n; ++i) {
    AgentState& a = world.agents[i];
    if (a.kind != RobotKind::Rescue) continue;
    CellCoord cell = a.cell();
    for (ObjectState& o : world.objects)
      if (o.interactable() &&
          cell_center_dist(cell, o.x, o.y) <= world.spec.effector_radius)
        ctx.remove_object(o, a.id);
  }

  world.tick++;
  return result;
}

}  // namespace intentsim::env
