#include "intentsim/grid/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "intentsim/grid/distance.hpp"

namespace intentsim::grid {

ScalarMap rasterize_ramp_path(ScalarMap canvas, const std::vector<CellCoord>& path,
                              const RampSpec& ramp) {
  if (path.empty()) throw std::invalid_argument("rasterize_ramp_path: empty path");
  ramp.validate();

  StepCost arc;
  for (size_t i = 0; i < path.size(); ++i) {
    const CellCoord& c = path[i];
    if (!canvas.in_bounds(c)) throw std::invalid_argument("rasterize_ramp_path: cell out of bounds");
    if (i > 0) {
      int dc = std::abs(c.col - path[i - 1].col);
      int dr = std::abs(c.row - path[i - 1].row);
      if (dc > 1 || dr > 1)
        throw std::invalid_argument("rasterize_ramp_path: consecutive cells must be 8-adjacent");
      if (dc + dr == 1)
        arc.axial++;
      else if (dc == 1 && dr == 1)
        arc.diagonal++;
      // identical consecutive cells add no arc length
    }
    float v = std::max(float(ramp.start_value - arc.value() / ramp.normalization_length),
                       ramp.floor_value);
    canvas.set(c, std::max(canvas.at(c), v));
  }
  return canvas;
}

std::vector<CellCoord> bresenham_line(CellCoord a, CellCoord b) {
  std::vector<CellCoord> out;
  int dc = std::abs(b.col - a.col), dr = std::abs(b.row - a.row);
  int sc = a.col < b.col ? 1 : -1, sr = a.row < b.row ? 1 : -1;
  int err = dc - dr;
  CellCoord cur = a;
  while (true) {
    out.push_back(cur);
    if (cur == b) break;
    int e2 = 2 * err;
    if (e2 > -dr) {
      err -= dr;
      cur.col += sc;
    }
    if (e2 < dc) {
      err += dc;
      cur.row += sr;
    }
  }
  return out;
}

void stamp_disc(ScalarMap& canvas, CellCoord center, double radius, float value) {
  int r = int(std::ceil(radius));
  for (int dr = -r; dr <= r; ++dr)
    for (int dc = -r; dc <= r; ++dc) {
      if (std::hypot(double(dc), double(dr)) > radius) continue;
      CellCoord c{center.col + dc, center.row + dr};
      if (canvas.in_bounds(c)) canvas.set(c, std::max(canvas.at(c), value));
    }
}

}  // namespace intentsim::grid
