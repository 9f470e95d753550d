#pragma once

#include <vector>

#include "intentsim/grid/types.hpp"

namespace intentsim::grid {

/// 2D field-of-view sensor: casts rays from the pose across [heading - fov/2,
/// heading + fov/2] at an angular pitch of 0.5 cells measured at max range,
/// marching each ray in 0.25-cell steps. A ray stops at the first Obstacle
/// cell, which is itself visible (walls are seen). Returned cells are the
/// ray-reached cells whose centers lie within `range` of the pose and within
/// fov/2 of the heading, in row-major order without duplicates.
std::vector<CellCoord> raycast_visibility(const OccupancyGrid& grid, const Pose& pose, double fov,
                                          double range);

}  // namespace intentsim::grid
