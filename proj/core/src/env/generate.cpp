#include "intentsim/env/generate.hpp"

#include <algorithm>
#include <random>

#include "intentsim/grid/distance.hpp"

namespace intentsim::env {

namespace {

using grid::Cell;

// Which side of the central obstacle a cell is on, for opposite-side
// layouts. Robots spawn on the receptacle side (positive), objects on the
// other.
struct SideSplit {
  bool horizontal = false;  // divider runs along a row
  int barrier = 0;          // the divider row / wall col in grid coords

  int side(CellCoord c) const {
    int v = horizontal ? c.row : c.col;
    if (v == barrier) return 0;
    return v > barrier ? +1 : -1;
  }
};

struct LayoutBuild {
  OccupancyGrid grid;
  std::optional<SideSplit> split;
};

LayoutBuild build_layout(const EnvironmentSpec& spec, std::mt19937& rng) {
  const int w = spec.interior_width + 2, h = spec.interior_height + 2;
  OccupancyGrid grid(w, h, Cell::Free);
  for (int c = 0; c < w; ++c) {
    grid.set(c, 0, Cell::Obstacle);
    grid.set(c, h - 1, Cell::Obstacle);
  }
  for (int r = 0; r < h; ++r) {
    grid.set(0, r, Cell::Obstacle);
    grid.set(w - 1, r, Cell::Obstacle);
  }

  auto jitter = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::optional<SideSplit> split;

  switch (spec.layout) {
    case Layout::SmallEmpty:
    case Layout::LargeEmpty:
      break;
    case Layout::SmallDivider: {
      // Horizontal divider with a one-cell opening against each side wall.
      int row = std::clamp(h / 2 + jitter(-2, 2), 3, h - 6);
      for (int c = 2; c <= w - 3; ++c) grid.set(c, row, Cell::Obstacle);
      split = SideSplit{true, row};
      break;
    }
    case Layout::LargeDoors: {
      // Vertical wall pierced by two one-cell doorways; keeps clear of the
      // receptacle columns.
      int col = std::clamp(w / 2 + jitter(-2, 2), 3, w - 6);
      int door_a = jitter(2, h / 2 - 1);
      int door_b = jitter(h / 2 + 1, h - 3);
      for (int r = 1; r <= h - 2; ++r)
        if (r != door_a && r != door_b) grid.set(col, r, Cell::Obstacle);
      split = SideSplit{false, col};
      break;
    }
    case Layout::LargeTunnels: {
      // Three-cell-thick wall crossed by two one-cell-wide tunnels.
      int col = std::clamp(w / 2 + jitter(-2, 2), 4, w - 7);
      int tun_a = jitter(2, h / 2 - 1);
      int tun_b = jitter(h / 2 + 1, h - 3);
      for (int r = 1; r <= h - 2; ++r)
        for (int dc = -1; dc <= 1; ++dc)
          if (r != tun_a && r != tun_b) grid.set(col + dc, r, Cell::Obstacle);
      split = SideSplit{false, col};
      break;
    }
    case Layout::LargeRooms: {
      // One vertical and one horizontal wall, a one-cell door per segment.
      int vc = std::clamp(w / 2 + jitter(-2, 2), 3, w - 6);
      int hr = std::clamp(h / 2 + jitter(-2, 2), 3, h - 6);
      int door_s = jitter(1, hr - 1), door_n = jitter(hr + 1, h - 2);
      int door_w = jitter(1, vc - 1), door_e = jitter(vc + 1, w - 2);
      for (int r = 1; r <= h - 2; ++r)
        if (r != door_s && r != door_n) grid.set(vc, r, Cell::Obstacle);
      for (int c = 1; c <= w - 2; ++c)
        if (c != door_w && c != door_e) grid.set(c, hr, Cell::Obstacle);
      break;
    }
  }
  return {std::move(grid), split};
}

std::vector<CellCoord> free_cells(const OccupancyGrid& grid, const CellRect& exclude) {
  std::vector<CellCoord> out;
  for (int r = 0; r < grid.height(); ++r)
    for (int c = 0; c < grid.width(); ++c) {
      CellCoord cc{c, r};
      if (grid.at(cc) == Cell::Free && !exclude.contains(cc)) out.push_back(cc);
    }
  return out;
}

bool all_reachable(const WorldState& world) {
  // Free-cell connectivity from each robot spawn to every object (and the
  // receptacle, when present), under the same movement rules agents use.
  for (const AgentState& a : world.agents) {
    ScalarMap d = grid::distance_field(world.grid, {a.cell()}, false);
    for (const ObjectState& o : world.objects)
      if (d.at(o.cell()) == ScalarMap::kUnreachable) return false;
    if (!world.receptacle.empty()) {
      bool any = false;
      for (const CellCoord& c : world.receptacle.cells())
        any = any || d.at(c) != ScalarMap::kUnreachable;
      if (!any) return false;
    }
  }
  return true;
}

bool try_generate(const EnvironmentSpec& spec, uint64_t seed, WorldState& out) {
  std::mt19937 rng((uint32_t)(seed & 0xffffffffu));

  WorldState world;
  world.spec = spec;
  LayoutBuild built = build_layout(spec, rng);
  world.grid = std::move(built.grid);

  if (spec.task == Task::Foraging) {
    // 3x3 region in the upper-right interior corner.
    int w = world.grid.width(), h = world.grid.height();
    world.receptacle = CellRect{w - 4, h - 4, w - 2, h - 2};
  }

  std::vector<CellCoord> candidates = free_cells(world.grid, world.receptacle);
  size_t needed = spec.team.size() + size_t(spec.num_objects);
  if (candidates.size() < needed)
    throw std::runtime_error("environment generation: more entities than free cells");

  // Opposite-side layouts: robots go on the receptacle side of the barrier.
  std::vector<CellCoord> robot_cells = candidates, object_cells = candidates;
  if (opposite_side_start(spec.layout) && built.split) {
    const SideSplit& split = *built.split;
    auto on_side = [&](int want) {
      std::vector<CellCoord> v;
      for (const CellCoord& c : candidates)
        if (split.side(c) == want) v.push_back(c);
      return v;
    };
    robot_cells = on_side(+1);
    object_cells = on_side(-1);
    if (robot_cells.size() < spec.team.size() ||
        object_cells.size() < size_t(spec.num_objects))
      return false;
  }

  std::uniform_real_distribution<double> uh(-M_PI, M_PI);
  std::vector<uint8_t> taken(size_t(world.grid.width()) * world.grid.height(), 0);
  auto take = [&](std::vector<CellCoord>& pool) -> std::optional<CellCoord> {
    // Rejection-sample an untaken cell from the pool.
    for (int tries = 0; tries < 64; ++tries) {
      CellCoord c = pool[std::uniform_int_distribution<size_t>(0, pool.size() - 1)(rng)];
      size_t i = size_t(c.row) * world.grid.width() + c.col;
      if (!taken[i]) {
        taken[i] = 1;
        return c;
      }
    }
    return std::nullopt;
  };

  for (size_t i = 0; i < spec.team.size(); ++i) {
    auto c = take(robot_cells);
    if (!c) return false;
    AgentState a;
    a.id = int(i);
    a.kind = spec.team[i];
    a.pose = {c->col + 0.5, c->row + 0.5, grid::wrap_angle(uh(rng))};
    world.agents.push_back(a);
  }
  for (int i = 0; i < spec.num_objects; ++i) {
    auto c = take(object_cells);
    if (!c) return false;
    ObjectState o;
    o.id = i;
    o.x = c->col + 0.5;
    o.y = c->row + 0.5;
    world.objects.push_back(o);
  }

  if (!all_reachable(world)) return false;

  if (!world.receptacle.empty())
    world.receptacle_field = grid::distance_field(world.grid, world.receptacle.cells(), false);

  out = std::move(world);
  return true;
}

}  // namespace

WorldState generate_environment(const EnvironmentSpec& raw_spec, uint64_t seed) {
  raw_spec.validate();
  EnvironmentSpec spec = raw_spec.resolved();

  WorldState world;
  for (uint64_t attempt = 0; attempt < 256; ++attempt) {
    if (try_generate(spec, seed + attempt * 0x9e3779b9u, world)) return world;
  }
  throw std::runtime_error("environment generation failed: no valid placement found");
}

}  // namespace intentsim::env
