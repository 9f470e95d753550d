#pragma once

#include <array>
#include <string>

#include "intentsim/grid/types.hpp"

namespace intentsim::grid {

/// Binary PGM (P5) render of a scalar map, min-max normalized to 8 bits.
/// Unreachable markers clamp to the max gray value. Row 0 of the map is the
/// bottom, so rows are written in reverse (images read top-down).
void write_pgm(const ScalarMap& map, const std::string& path);

/// Binary PGM (P5) render of an occupancy grid: Free=255, Unknown=128,
/// Obstacle=0.
void write_pgm(const OccupancyGrid& grid, const std::string& path);

/// Simple RGB raster with the same row convention, for trajectory overlays.
class RgbImage {
 public:
  RgbImage(int width, int height, std::array<uint8_t, 3> fill = {255, 255, 255});

  int width() const { return width_; }
  int height() const { return height_; }
  void set(int col, int row, std::array<uint8_t, 3> rgb);
  std::array<uint8_t, 3> get(int col, int row) const;

  /// Binary PPM (P6).
  void write_ppm(const std::string& path) const;

 private:
  int width_, height_;
  std::vector<uint8_t> data_;
};

}  // namespace intentsim::grid
