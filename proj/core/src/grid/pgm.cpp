#include "intentsim/grid/pgm.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace intentsim::grid {

namespace {

void write_binary(const std::string& path, const std::string& header,
                  const std::vector<uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << header;
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) throw std::runtime_error("short write: " + path);
}

}  // namespace

void write_pgm(const ScalarMap& map, const std::string& path) {
  float lo = ScalarMap::kUnreachable, hi = -ScalarMap::kUnreachable;
  for (float v : map.values()) {
    if (v == ScalarMap::kUnreachable) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo > hi) {  // all-unreachable map
    lo = 0.0f;
    hi = 1.0f;
  }
  float span = hi > lo ? hi - lo : 1.0f;

  std::vector<uint8_t> bytes;
  bytes.reserve(size_t(map.width()) * map.height());
  for (int r = map.height() - 1; r >= 0; --r)
    for (int c = 0; c < map.width(); ++c) {
      float v = map.at(c, r);
      float n = v == ScalarMap::kUnreachable ? 1.0f : (v - lo) / span;
      bytes.push_back(uint8_t(std::clamp(n, 0.0f, 1.0f) * 255.0f + 0.5f));
    }

  char header[64];
  std::snprintf(header, sizeof(header), "P5\n%d %d\n255\n", map.width(), map.height());
  write_binary(path, header, bytes);
}

void write_pgm(const OccupancyGrid& grid, const std::string& path) {
  std::vector<uint8_t> bytes;
  bytes.reserve(size_t(grid.width()) * grid.height());
  for (int r = grid.height() - 1; r >= 0; --r)
    for (int c = 0; c < grid.width(); ++c) {
      switch (grid.at(c, r)) {
        case Cell::Free: bytes.push_back(255); break;
        case Cell::Unknown: bytes.push_back(128); break;
        case Cell::Obstacle: bytes.push_back(0); break;
      }
    }
  char header[64];
  std::snprintf(header, sizeof(header), "P5\n%d %d\n255\n", grid.width(), grid.height());
  write_binary(path, header, bytes);
}

RgbImage::RgbImage(int width, int height, std::array<uint8_t, 3> fill)
    : width_(width), height_(height), data_(size_t(width) * height * 3) {
  for (size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = fill[0];
    data_[i + 1] = fill[1];
    data_[i + 2] = fill[2];
  }
}

void RgbImage::set(int col, int row, std::array<uint8_t, 3> rgb) {
  if (col < 0 || col >= width_ || row < 0 || row >= height_)
    throw std::out_of_range("RgbImage::set out of bounds");
  size_t i = (size_t(row) * width_ + col) * 3;
  data_[i] = rgb[0];
  data_[i + 1] = rgb[1];
  data_[i + 2] = rgb[2];
}

std::array<uint8_t, 3> RgbImage::get(int col, int row) const {
  size_t i = (size_t(row) * width_ + col) * 3;
  return {data_[i], data_[i + 1], data_[i + 2]};
}

void RgbImage::write_ppm(const std::string& path) const {
  std::vector<uint8_t> bytes;
  bytes.reserve(data_.size());
  for (int r = height_ - 1; r >= 0; --r) {
    const uint8_t* row = data_.data() + size_t(r) * width_ * 3;
    bytes.insert(bytes.end(), row, row + size_t(width_) * 3);
  }
  char header[64];
  std::snprintf(header, sizeof(header), "P6\n%d %d\n255\n", width_, height_);
  write_binary(path, header, bytes);
}

}  // namespace intentsim::grid
