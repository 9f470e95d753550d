#include "intentsim/percept/intention.hpp"

#include <algorithm>
#include <cmath>

#include "intentsim/grid/egocentric.hpp"
#include "intentsim/grid/raster.hpp"

namespace intentsim::percept {

const char* to_string(IntentionVariant v) {
  switch (v) {
    case IntentionVariant::RampPath: return "ramp_path";
    case IntentionVariant::BinaryPath: return "binary_path";
    case IntentionVariant::StraightLine: return "straight_line";
    case IntentionVariant::TargetCircle: return "target_circle";
    case IntentionVariant::PerRobotChannels: return "per_robot_channels";
    case IntentionVariant::NonspatialTiled: return "nonspatial_tiled";
    case IntentionVariant::HistoryMap: return "history_map";
    case IntentionVariant::Predicted: return "predicted";
    case IntentionVariant::None: return "none";
  }
  return "?";
}

const std::vector<IntentionVariant>& all_intention_variants() {
  static const std::vector<IntentionVariant> order = {
      IntentionVariant::RampPath,         IntentionVariant::BinaryPath,
      IntentionVariant::StraightLine,     IntentionVariant::TargetCircle,
      IntentionVariant::PerRobotChannels, IntentionVariant::NonspatialTiled,
      IntentionVariant::HistoryMap,       IntentionVariant::Predicted,
      IntentionVariant::None,
  };
  return order;
}

IntentionVariant intention_variant_from_string(const std::string& s) {
  for (IntentionVariant v : all_intention_variants())
    if (s == to_string(v)) return v;
  std::string valid;
  for (IntentionVariant v : all_intention_variants()) {
    if (!valid.empty()) valid += ", ";
    valid += to_string(v);
  }
  throw std::invalid_argument("unknown intention variant '" + s + "' (valid: " + valid + ")");
}

int intention_channel_count(IntentionVariant v, int team_size) {
  switch (v) {
    case IntentionVariant::PerRobotChannels: return std::max(1, team_size - 1);
    case IntentionVariant::NonspatialTiled: return std::max(1, 2 * (team_size - 1));
    default: return 1;
  }
}

grid::RampSpec intention_ramp(int out_size) {
  return {1.0f, float(out_size * std::sqrt(2.0)), 0.1f};
}

namespace {

using grid::egocentric_crop;

// Sorted view of the records, nearest sender first (ties by agent id).
// Distance is from the deciding agent to the sender's current cell, which
// is the first waypoint of its record.
std::vector<const IntentionRecord*> nearest_first(const std::vector<IntentionRecord>& records,
                                                  const Pose& frame) {
  std::vector<const IntentionRecord*> sorted;
  for (const IntentionRecord& r : records) {
    if (r.waypoints.empty()) throw std::invalid_argument("intention record with no waypoints");
    sorted.push_back(&r);
  }
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](const IntentionRecord* a, const IntentionRecord* b) {
                     auto dist = [&](const IntentionRecord* r) {
                       return std::hypot(r->waypoints.front().col + 0.5 - frame.x,
                                         r->waypoints.front().row + 0.5 - frame.y);
                     };
                     double da = dist(a), db = dist(b);
                     if (da != db) return da < db;
                     return a->agent_id < b->agent_id;
                   });
  return sorted;
}

}  // namespace

IntentionEncoding encode_intention(const std::vector<IntentionRecord>& records,
                                   IntentionVariant variant, const Pose& frame, int out_size,
                                   int team_size, int grid_width, int grid_height) {
  IntentionEncoding out;
  ScalarMap canvas(grid_width, grid_height, 0.0f);
  const grid::RampSpec ramp = intention_ramp(out_size);

  switch (variant) {
    case IntentionVariant::RampPath:
    case IntentionVariant::Predicted:  // communicated form; predictor swaps in at runtime
      for (const IntentionRecord& r : records)
        canvas = grid::rasterize_ramp_path(std::move(canvas), r.waypoints, ramp);
      out.channels.push_back(egocentric_crop(canvas, frame, out_size, 0.0f));
      break;

    case IntentionVariant::BinaryPath:
      for (const IntentionRecord& r : records)
        for (const CellCoord& c : r.waypoints) canvas.set(c, 1.0f);
      out.channels.push_back(egocentric_crop(canvas, frame, out_size, 0.0f));
      break;

    case IntentionVariant::StraightLine:
      for (const IntentionRecord& r : records) {
        auto line = grid::bresenham_line(r.waypoints.front(), r.waypoints.back());
        canvas = grid::rasterize_ramp_path(std::move(canvas), line, ramp);
      }
      out.channels.push_back(egocentric_crop(canvas, frame, out_size, 0.0f));
      break;

    case IntentionVariant::TargetCircle:
      for (const IntentionRecord& r : records)
        grid::stamp_disc(canvas, r.waypoints.back(), 2.0, 1.0f);
      out.channels.push_back(egocentric_crop(canvas, frame, out_size, 0.0f));
      break;

    case IntentionVariant::PerRobotChannels: {
      auto sorted = nearest_first(records, frame);
      for (const IntentionRecord* r : sorted) {
        ScalarMap one(grid_width, grid_height, 0.0f);
        grid::stamp_disc(one, r->waypoints.back(), 2.0, 1.0f);
        out.channels.push_back(egocentric_crop(one, frame, out_size, 0.0f));
      }
      while (int(out.channels.size()) < intention_channel_count(variant, team_size))
        out.channels.emplace_back(out_size, out_size, 0.0f);
      break;
    }

    case IntentionVariant::NonspatialTiled: {
      out.tiled = true;
      auto sorted = nearest_first(records, frame);
      const double half = out_size / 2.0;
      for (const IntentionRecord* r : sorted) {
        double ex, ey;
        grid::global_to_ego(frame, r->waypoints.back().col + 0.5, r->waypoints.back().row + 0.5,
                            ex, ey);
        out.tiled_values.push_back(float(std::clamp(ex / half, -1.0, 1.0)));
        out.tiled_values.push_back(float(std::clamp(ey / half, -1.0, 1.0)));
      }
      while (int(out.tiled_values.size()) < intention_channel_count(variant, team_size))
        out.tiled_values.push_back(0.0f);
      break;
    }

    case IntentionVariant::HistoryMap:
      for (const IntentionRecord& r : records) {
        // waypoints are history cells, newest last; weight 1 - k/20 for the
        // k-th most recent.
        int k = 0;
        for (auto it = r.waypoints.rbegin(); it != r.waypoints.rend(); ++it, ++k) {
          float v = 1.0f - float(k) / float(20);
          if (v <= 0.0f) break;
          if (canvas.in_bounds(*it)) canvas.set(*it, std::max(canvas.at(*it), v));
        }
      }
      out.channels.push_back(egocentric_crop(canvas, frame, out_size, 0.0f));
      break;

    case IntentionVariant::None:
      out.channels.emplace_back(out_size, out_size, 0.0f);
      break;
  }
  return out;
}

}  // namespace intentsim::percept
