#include "intentsim/percept/belief.hpp"

namespace intentsim::percept {

using grid::Cell;

AgentBelief::AgentBelief(int self_id, int grid_width, int grid_height, size_t num_agents,
                         size_t num_objects)
    : self_id_(self_id),
      grid_(grid_width, grid_height, Cell::Unknown),
      objects_(num_objects),
      agents_(num_agents),
      history_(num_agents) {}

void integrate_observation(AgentBelief& belief, const std::vector<CellCoord>& visible,
                           const WorldState& truth) {
  std::vector<uint8_t> vis(size_t(truth.grid.width()) * truth.grid.height(), 0);
  for (const CellCoord& c : visible) {
    if (!truth.grid.in_bounds(c)) throw std::invalid_argument("visible cell out of bounds");
    belief.grid_.set(c, truth.grid.at(c));
    vis[size_t(c.row) * truth.grid.width() + c.col] = 1;
  }
  auto is_visible = [&](CellCoord c) {
    return vis[size_t(c.row) * truth.grid.width() + c.col] != 0;
  };

  // Refresh records for entities standing in view.
  for (const env::ObjectState& o : truth.objects) {
    if (o.interactable() && is_visible(o.cell()))
      belief.objects_[size_t(o.id)] = ObservedObject{o.cell(), truth.tick};
  }
  for (const env::AgentState& a : truth.agents) {
    if (a.id == belief.self_id_) continue;
    if (is_visible(a.cell()))
      belief.agents_[size_t(a.id)] = ObservedAgent{a.pose, a.carrying, truth.tick};
  }

  // Forget objects whose remembered cell is now visibly empty.
  for (size_t id = 0; id < belief.objects_.size(); ++id) {
    auto& rec = belief.objects_[id];
    if (!rec || !is_visible(rec->cell)) continue;
    const env::ObjectState& o = truth.objects[id];
    if (!o.interactable() || !(o.cell() == rec->cell)) rec.reset();
  }
}

void update_pose_history(AgentBelief& belief, const WorldState& truth) {
  for (const env::AgentState& a : truth.agents) {
    if (a.id == belief.self_id_) continue;
    auto& ring = belief.history_[size_t(a.id)];
    ring.push_back(a.pose);
    while (ring.size() > AgentBelief::kHistoryCapacity) ring.pop_front();
  }
}

}  // namespace intentsim::percept
