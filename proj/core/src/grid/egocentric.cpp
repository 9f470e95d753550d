#include "intentsim/grid/egocentric.hpp"

#include <cmath>

namespace intentsim::grid {

namespace {

struct Frame {
  double cos_a, sin_a, x, y;
  int center;
};

Frame make_frame(const Pose& pose, int out_size) {
  if (out_size < 1 || out_size % 2 == 0)
    throw std::invalid_argument("egocentric crop size must be odd and positive");
  double a = pose.heading - M_PI / 2.0;
  return {std::cos(a), std::sin(a), pose.x, pose.y, (out_size - 1) / 2};
}

inline void sample_point(const Frame& f, int r, int c, double& px, double& py) {
  double dx = c - f.center;
  double dy = r - f.center;
  px = f.x + f.cos_a * dx - f.sin_a * dy;
  py = f.y + f.sin_a * dx + f.cos_a * dy;
}

}  // namespace

ScalarMap egocentric_crop(const ScalarMap& source, const Pose& pose, int out_size, float fill) {
  Frame f = make_frame(pose, out_size);
  ScalarMap out(out_size, out_size, fill);
  for (int r = 0; r < out_size; ++r)
    for (int c = 0; c < out_size; ++c) {
      double px, py;
      sample_point(f, r, c, px, py);
      CellCoord cell = cell_of(px, py);
      if (source.in_bounds(cell)) out.set(c, r, source.at(cell));
    }
  return out;
}

ScalarMap egocentric_crop(const OccupancyGrid& source, const Pose& pose, int out_size, float fill,
                          const CellEncoding& enc) {
  Frame f = make_frame(pose, out_size);
  ScalarMap out(out_size, out_size, fill);
  for (int r = 0; r < out_size; ++r)
    for (int c = 0; c < out_size; ++c) {
      double px, py;
      sample_point(f, r, c, px, py);
      CellCoord cell = cell_of(px, py);
      if (!source.in_bounds(cell)) continue;
      switch (source.at(cell)) {
        case Cell::Free: out.set(c, r, enc.free); break;
        case Cell::Obstacle: out.set(c, r, enc.obstacle); break;
        case Cell::Unknown: out.set(c, r, enc.unknown); break;
      }
    }
  return out;
}

Pose ego_to_global(const Pose& pose, int out_size, int out_row, int out_col) {
  Frame f = make_frame(pose, out_size);
  Pose p;
  sample_point(f, out_row, out_col, p.x, p.y);
  p.heading = pose.heading;
  return p;
}

void global_to_ego(const Pose& pose, double gx, double gy, double& ex, double& ey) {
  double a = pose.heading - M_PI / 2.0;
  double dx = gx - pose.x, dy = gy - pose.y;
  ex = std::cos(a) * dx + std::sin(a) * dy;
  ey = -std::sin(a) * dx + std::cos(a) * dy;
}

}  // namespace intentsim::grid
