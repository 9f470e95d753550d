#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace intentsim::grid {

/// One grid cell in an occupancy map.
enum class Cell : uint8_t { Free = 0, Obstacle = 1, Unknown = 2 };

struct CellCoord {
  int col = 0;
  int row = 0;

  bool operator==(const CellCoord&) const = default;
};

/// Continuous agent pose in cell units. x grows rightward (columns), y grows
/// upward (rows); heading is normalized to [-pi, pi), with pi/2 meaning
/// "facing up" (toward increasing rows).
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
};

/// Wraps an angle into [-pi, pi).
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * M_PI;
  a = std::fmod(a + M_PI, two_pi);
  if (a < 0) a += two_pi;
  return a - M_PI;
}

inline CellCoord cell_of(double x, double y) {
  return {static_cast<int>(std::floor(x)), static_cast<int>(std::floor(y))};
}

inline CellCoord cell_of(const Pose& p) { return cell_of(p.x, p.y); }

/// 2D occupancy lattice, row-major, row 0 at the bottom (y = 0). Rendering
/// flips rows so images read top-down.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int width, int height, Cell fill = Cell::Free)
      : width_(width), height_(height), cells_(size_t(width) * height, fill) {
    if (width < 1 || height < 1) throw std::invalid_argument("grid dims must be >= 1");
  }

  int width() const { return width_; }
  int height() const { return height_; }

  bool in_bounds(CellCoord c) const {
    return c.col >= 0 && c.col < width_ && c.row >= 0 && c.row < height_;
  }

  Cell at(CellCoord c) const { return cells_[idx(c)]; }
  Cell at(int col, int row) const { return cells_[idx({col, row})]; }
  void set(CellCoord c, Cell v) { cells_[idx(c)] = v; }
  void set(int col, int row, Cell v) { cells_[idx({col, row})] = v; }

  /// Traversability for planning/dynamics. Unknown cells are traversable
  /// only when the caller opts in (agent-side planning does, ground truth
  /// does not).
  bool traversable(CellCoord c, bool traversable_unknown) const {
    Cell v = at(c);
    return v == Cell::Free || (v == Cell::Unknown && traversable_unknown);
  }

  bool operator==(const OccupancyGrid&) const = default;

 private:
  size_t idx(CellCoord c) const {
    if (!in_bounds(c)) throw std::out_of_range("cell out of grid bounds");
    return size_t(c.row) * width_ + c.col;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Cell> cells_;
};

/// Per-cell real values over the same lattice convention as OccupancyGrid.
class ScalarMap {
 public:
  /// Marker for cells no path reaches; downstream normalization clamps it.
  static constexpr float kUnreachable = std::numeric_limits<float>::max();

  ScalarMap() = default;
  ScalarMap(int width, int height, float fill = 0.0f)
      : width_(width), height_(height), values_(size_t(width) * height, fill) {
    if (width < 1 || height < 1) throw std::invalid_argument("map dims must be >= 1");
  }

  int width() const { return width_; }
  int height() const { return height_; }

  bool in_bounds(CellCoord c) const {
    return c.col >= 0 && c.col < width_ && c.row >= 0 && c.row < height_;
  }

  float at(CellCoord c) const { return values_[idx(c)]; }
  float at(int col, int row) const { return values_[idx({col, row})]; }
  void set(CellCoord c, float v) { values_[idx(c)] = v; }
  void set(int col, int row, float v) { values_[idx({col, row})] = v; }

  const std::vector<float>& values() const { return values_; }
  std::vector<float>& values() { return values_; }

  bool operator==(const ScalarMap&) const = default;

 private:
  size_t idx(CellCoord c) const {
    if (!in_bounds(c)) throw std::out_of_range("cell out of map bounds");
    return size_t(c.row) * width_ + c.col;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> values_;
};

/// Linear value ramp written along a path: start_value at the path head,
/// dropping by 1/normalization_length per cell of 8-connected arc length,
/// clamped at floor_value.
struct RampSpec {
  float start_value = 1.0f;
  float normalization_length = 1.0f;
  float floor_value = 0.1f;

  void validate() const {
    if (!(start_value > floor_value) || floor_value < 0.0f)
      throw std::invalid_argument("ramp requires start_value > floor_value >= 0");
    if (!(normalization_length > 0.0f))
      throw std::invalid_argument("ramp normalization_length must be > 0");
  }
};

}  // namespace intentsim::grid
