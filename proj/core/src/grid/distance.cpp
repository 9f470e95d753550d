#include "intentsim/grid/distance.hpp"

#include <algorithm>
#include <queue>

namespace intentsim::grid {

namespace {

struct Label {
  StepCost cost;
  int cell_index;

  double value() const { return cost.value(); }
};

struct LabelGreater {
  bool operator()(const Label& a, const Label& b) const {
    double va = a.value(), vb = b.value();
    if (va != vb) return va > vb;
    return a.cell_index > b.cell_index;  // stable pop order for equal costs
  }
};

bool diagonal_allowed(const OccupancyGrid& grid, CellCoord from, CellCoord step,
                      bool traversable_unknown) {
  // Both axial cells flanking the diagonal must be traversable.
  CellCoord a{from.col + step.col, from.row};
  CellCoord b{from.col, from.row + step.row};
  return grid.traversable(a, traversable_unknown) && grid.traversable(b, traversable_unknown);
}

// Exact multi-source Dijkstra with (axial, diagonal) step-count labels.
std::vector<StepCost> dijkstra_labels(const OccupancyGrid& grid,
                                      const std::vector<CellCoord>& sources,
                                      bool traversable_unknown) {
  if (sources.empty()) throw std::invalid_argument("distance_field: empty source set");
  const int w = grid.width(), h = grid.height();
  const StepCost unset{-1, -1};
  std::vector<StepCost> label(size_t(w) * h, unset);
  std::vector<uint8_t> done(size_t(w) * h, 0);

  std::priority_queue<Label, std::vector<Label>, LabelGreater> open;
  for (const CellCoord& s : sources) {
    if (!grid.in_bounds(s)) throw std::invalid_argument("distance_field: source out of bounds");
    if (!grid.traversable(s, traversable_unknown)) continue;
    int i = s.row * w + s.col;
    label[i] = StepCost{0, 0};
    open.push({label[i], i});
  }

  while (!open.empty()) {
    Label cur = open.top();
    open.pop();
    if (done[cur.cell_index]) continue;
    done[cur.cell_index] = 1;
    CellCoord c{cur.cell_index % w, cur.cell_index / w};

    for (const CellCoord& d : kNeighborOrder) {
      CellCoord n{c.col + d.col, c.row + d.row};
      if (!grid.in_bounds(n) || !grid.traversable(n, traversable_unknown)) continue;
      bool diag = d.col != 0 && d.row != 0;
      if (diag && !diagonal_allowed(grid, c, d, traversable_unknown)) continue;
      StepCost cand = cur.cost;
      (diag ? cand.diagonal : cand.axial)++;
      int ni = n.row * w + n.col;
      if (label[ni] == unset || cand.value() < label[ni].value()) {
        label[ni] = cand;
        open.push({cand, ni});
      }
    }
  }
  return label;
}

}  // namespace

ScalarMap distance_field(const OccupancyGrid& grid, const std::vector<CellCoord>& sources,
                         bool traversable_unknown) {
  auto labels = dijkstra_labels(grid, sources, traversable_unknown);
  ScalarMap out(grid.width(), grid.height(), ScalarMap::kUnreachable);
  const StepCost unset{-1, -1};
  for (int r = 0; r < grid.height(); ++r)
    for (int c = 0; c < grid.width(); ++c) {
      const StepCost& l = labels[size_t(r) * grid.width() + c];
      if (!(l == unset)) out.set(c, r, float(l.value()));
    }
  return out;
}

std::optional<std::vector<CellCoord>> shortest_path(const OccupancyGrid& grid, CellCoord from,
                                                    CellCoord to, bool traversable_unknown) {
  if (!grid.in_bounds(from) || !grid.in_bounds(to))
    throw std::invalid_argument("shortest_path: endpoint out of bounds");
  if (!grid.traversable(from, traversable_unknown))
    throw std::invalid_argument("shortest_path: untraversable start cell");

  // Distances to `to`; the greedy descent below then walks from `from`.
  auto labels = dijkstra_labels(grid, {to}, traversable_unknown);
  const int w = grid.width();
  const StepCost unset{-1, -1};
  auto label_at = [&](CellCoord c) -> const StepCost& { return labels[size_t(c.row) * w + c.col]; };

  if (label_at(from) == unset) return std::nullopt;

  std::vector<CellCoord> path{from};
  CellCoord cur = from;
  while (!(cur == to)) {
    StepCost here = label_at(cur);
    bool advanced = false;
    for (const CellCoord& d : kNeighborOrder) {
      CellCoord n{cur.col + d.col, cur.row + d.row};
      if (!grid.in_bounds(n) || !grid.traversable(n, traversable_unknown)) continue;
      bool diag = d.col != 0 && d.row != 0;
      if (diag && !diagonal_allowed(grid, cur, d, traversable_unknown)) continue;
      if (label_at(n) == unset) continue;
      StepCost expect = label_at(n);
      (diag ? expect.diagonal : expect.axial)++;
      if (expect == here) {  // exact step-count match: n lies on a shortest path
        path.push_back(n);
        cur = n;
        advanced = true;
        break;
      }
    }
    if (!advanced) return std::nullopt;  // disconnected under the corner rule
  }
  return path;
}

}  // namespace intentsim::grid
