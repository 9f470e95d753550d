#include "intentsim/grid/raycast.hpp"

#include <cmath>

namespace intentsim::grid {

namespace {

// Clear straight shot from the pose to the cell's center, sampled every
// 0.25 cells. Keeps the sensor sound: a swept ray can thread past an
// obstacle corner that blocks the direct view of the cell.
bool center_segment_clear(const OccupancyGrid& grid, const Pose& pose, CellCoord target) {
  double tx = target.col + 0.5, ty = target.row + 0.5;
  double dx = tx - pose.x, dy = ty - pose.y;
  double dist = std::hypot(dx, dy);
  if (dist == 0.0) return true;
  int steps = std::max(1, int(std::ceil(dist / 0.25)));
  for (int k = 0; k <= steps; ++k) {
    double t = double(k) / steps;
    CellCoord c = cell_of(pose.x + t * dx, pose.y + t * dy);
    if (!grid.in_bounds(c)) return false;
    if (c == target) return true;  // arrived before any obstacle
    if (grid.at(c) == Cell::Obstacle) return false;
  }
  return true;
}

}  // namespace

std::vector<CellCoord> raycast_visibility(const OccupancyGrid& grid, const Pose& pose, double fov,
                                          double range) {
  if (!(fov > 0.0) || fov > 2.0 * M_PI + 1e-12)
    throw std::invalid_argument("raycast_visibility: fov must be in (0, 2*pi]");
  if (!(range > 0.0)) throw std::invalid_argument("raycast_visibility: range must be > 0");

  const int w = grid.width(), h = grid.height();
  std::vector<uint8_t> hit(size_t(w) * h, 0);

  auto center_ok = [&](CellCoord c) {
    double dx = c.col + 0.5 - pose.x;
    double dy = c.row + 0.5 - pose.y;
    if (std::hypot(dx, dy) > range) return false;
    if (dx == 0.0 && dy == 0.0) return true;
    double rel = wrap_angle(std::atan2(dy, dx) - pose.heading);
    return std::abs(rel) <= fov / 2.0 + 1e-12;
  };

  const double march = 0.25;
  const int n_rays = std::max(1, int(std::ceil(fov * range / 0.5)));
  const double dtheta = fov / n_rays;
  const double theta0 = pose.heading - fov / 2.0;

  // n_rays + 1 rays so both sector edges are covered.
  for (int k = 0; k <= n_rays; ++k) {
    double theta = theta0 + k * dtheta;
    double cx = std::cos(theta), cy = std::sin(theta);
    CellCoord prev{-1, -1};
    for (double t = 0.0; t <= range; t += march) {
      CellCoord c = cell_of(pose.x + t * cx, pose.y + t * cy);
      if (!grid.in_bounds(c)) break;
      if (c == prev) continue;
      prev = c;
      if (center_ok(c) && center_segment_clear(grid, pose, c))
        hit[size_t(c.row) * w + c.col] = 1;
      if (grid.at(c) == Cell::Obstacle) break;  // wall is visible, nothing past it
    }
  }

  std::vector<CellCoord> out;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      if (hit[size_t(r) * w + c]) out.push_back({c, r});
  return out;
}

}  // namespace intentsim::grid
