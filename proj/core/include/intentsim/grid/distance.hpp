#pragma once

#include <optional>
#include <vector>

#include "intentsim/grid/types.hpp"

namespace intentsim::grid {

/// Exact path cost over an 8-connected grid: axial steps count 1, diagonal
/// steps count sqrt(2). Keeping the two step counts separate makes cost
/// comparison and tie-breaking exact (no accumulated float error).
struct StepCost {
  int axial = 0;
  int diagonal = 0;

  double value() const { return axial + diagonal * std::sqrt(2.0); }
  bool operator==(const StepCost&) const = default;
};

/// Fixed neighbor expansion order: E, NE, N, NW, W, SW, S, SE.
/// shortest_path tie-breaking is defined in terms of this order.
inline constexpr CellCoord kNeighborOrder[8] = {
    {+1, 0}, {+1, +1}, {0, +1}, {-1, +1}, {-1, 0}, {-1, -1}, {0, -1}, {+1, -1}};

/// Multi-source shortest-path distances over the 8-connected grid.
///
/// Axial moves cost 1, diagonal moves sqrt(2); a diagonal step is allowed
/// only when both adjacent axial cells are traversable (no corner cutting).
/// Non-traversable cells carry ScalarMap::kUnreachable, as do traversable
/// cells no source reaches.
ScalarMap distance_field(const OccupancyGrid& grid, const std::vector<CellCoord>& sources,
                         bool traversable_unknown);

/// Deterministic shortest path from `from` to `to`, both inclusive.
/// Consecutive cells are 8-adjacent and the total cost equals the
/// distance-field value at `from` for source `to`. Ties between equal-cost
/// continuations resolve to the first candidate in kNeighborOrder.
/// Returns nullopt when `to` is unreachable.
std::optional<std::vector<CellCoord>> shortest_path(const OccupancyGrid& grid, CellCoord from,
                                                    CellCoord to, bool traversable_unknown);

}  // namespace intentsim::grid
