#pragma once

#include "intentsim/grid/types.hpp"

namespace intentsim::grid {

/// Crops an odd-sized egocentric window out of `source`: the agent sits at
/// the output center, facing up. Output cell (r, c) samples the source at
/// pose + R(heading - pi/2) * offset, where offset is the (x, y) offset of
/// (r, c) from the output center; nearest-neighbor, out-of-bounds samples
/// take `fill`.
ScalarMap egocentric_crop(const ScalarMap& source, const Pose& pose, int out_size, float fill);

/// Same transform over an occupancy grid, with a per-state encoding applied
/// at sample time (free/obstacle/unknown -> value; fill for out of bounds).
struct CellEncoding {
  float free = 0.0f;
  float obstacle = 1.0f;
  float unknown = 0.5f;
};
ScalarMap egocentric_crop(const OccupancyGrid& source, const Pose& pose, int out_size, float fill,
                          const CellEncoding& enc);

/// Maps an output-window cell back to the global sample point (cell units).
/// Used to translate spatial actions into world targets; shares the exact
/// transform used by the crops above.
Pose ego_to_global(const Pose& pose, int out_size, int out_row, int out_col);

/// Inverse direction: global point -> continuous ego-frame (x right, y up)
/// coordinates relative to the agent, in cell units.
void global_to_ego(const Pose& pose, double gx, double gy, double& ex, double& ey);

}  // namespace intentsim::grid
