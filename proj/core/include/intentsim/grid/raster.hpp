#pragma once

#include <vector>

#include "intentsim/grid/types.hpp"

namespace intentsim::grid {

/// Writes a linear value ramp along `path` into `canvas` and returns the
/// result. The i-th path cell gets max(start_value - d_i / normalization_length,
/// floor_value), with d_i the cumulative 8-connected arc length from the path
/// head. Cells written more than once (self-crossings, earlier writes from
/// other paths) keep the maximum; untouched cells are unchanged.
///
/// Consecutive path cells must be 8-adjacent or identical.
ScalarMap rasterize_ramp_path(ScalarMap canvas, const std::vector<CellCoord>& path,
                              const RampSpec& ramp);

/// 8-adjacent cell sequence from a to b, both inclusive (Bresenham).
std::vector<CellCoord> bresenham_line(CellCoord a, CellCoord b);

/// Max-writes `value` into every in-bounds cell whose center lies within
/// `radius` of the center of `center`.
void stamp_disc(ScalarMap& canvas, CellCoord center, double radius, float value);

}  // namespace intentsim::grid
