#include "intentsim/percept/state.hpp"

#include <algorithm>
#include <cmath>

#include "intentsim/grid/distance.hpp"
#include "intentsim/grid/egocentric.hpp"

namespace intentsim::percept {

using grid::Cell;
using grid::OccupancyGrid;

int base_channel_count(env::Task task) { return task == env::Task::Foraging ? 4 : 3; }

int state_channel_count(env::Task task, IntentionVariant variant, int team_size) {
  return base_channel_count(task) + intention_channel_count(variant, team_size);
}

namespace {

ScalarMap normalized_distance(const OccupancyGrid& believed,
                              const std::vector<grid::CellCoord>& sources, double diagonal) {
  ScalarMap d = grid::distance_field(believed, sources, /*traversable_unknown=*/true);
  for (float& v : d.values())
    v = v == ScalarMap::kUnreachable ? 1.0f : std::clamp(float(v / diagonal), 0.0f, 1.0f);
  return d;
}

}  // namespace

StateTensor build_state_tensor(const AgentBelief& belief, const env::AgentState& self,
                               const IntentionEncoding& intention, const env::EnvironmentSpec& spec,
                               const env::CellRect& receptacle, int out_size) {
  const OccupancyGrid& believed = belief.grid();
  const int w = believed.width(), h = believed.height();
  const double diagonal = std::hypot(double(w), double(h));
  const ChannelEncoding& enc = kChannelEncoding;

  StateTensor out;
  auto push = [&](ScalarMap m, std::string name) {
    out.channels.push_back(std::move(m));
    out.channel_names.push_back(std::move(name));
  };

  // Environment: believed occupancy plus remembered objects, one channel.
  {
    ScalarMap env_map(w, h, enc.env_unknown);
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) {
        switch (believed.at(c, r)) {
          case Cell::Free: env_map.set(c, r, enc.env_free); break;
          case Cell::Obstacle: env_map.set(c, r, enc.env_obstacle); break;
          case Cell::Unknown: env_map.set(c, r, enc.env_unknown); break;
        }
      }
    for (const auto& rec : belief.objects())
      if (rec) env_map.set(rec->cell, enc.env_object);
    push(grid::egocentric_crop(env_map, self.pose, out_size, enc.env_obstacle), "environment");
  }

  // Agent footprints at last-observed poses; self at the center.
  {
    ScalarMap agents(w, h, 0.0f);
    for (const auto& rec : belief.agents())
      if (rec) {
        grid::CellCoord c = grid::cell_of(rec->pose);
        float v = rec->carrying ? enc.other_carrying : enc.other_footprint;
        if (agents.in_bounds(c)) agents.set(c, std::max(agents.at(c), v));
      }
    grid::CellCoord sc = self.cell();
    agents.set(sc, self.carrying ? enc.self_carrying : enc.self_footprint);
    push(grid::egocentric_crop(agents, self.pose, out_size, 0.0f), "agents");
  }

  if (spec.task == env::Task::Foraging) {
    ScalarMap d = normalized_distance(believed, receptacle.cells(), diagonal);
    push(grid::egocentric_crop(d, self.pose, out_size, 1.0f), "receptacle_distance");
  }

  {
    ScalarMap d = normalized_distance(believed, {self.cell()}, diagonal);
    push(grid::egocentric_crop(d, self.pose, out_size, 1.0f), "self_distance");
  }

  if (intention.tiled) {
    for (size_t i = 0; i < intention.tiled_values.size(); ++i) {
      out.channels.emplace_back(out_size, out_size, intention.tiled_values[i]);
      out.channel_names.push_back("intention_tiled_" + std::to_string(i / 2) +
                                  (i % 2 == 0 ? "_x" : "_y"));
    }
  } else {
    for (size_t i = 0; i < intention.channels.size(); ++i) {
      if (intention.channels[i].width() != out_size)
        throw std::invalid_argument("intention channel size mismatch");
      out.channels.push_back(intention.channels[i]);
      out.channel_names.push_back(intention.channels.size() == 1
                                      ? "intention"
                                      : "intention_" + std::to_string(i));
    }
  }
  return out;
}

}  // namespace intentsim::percept
