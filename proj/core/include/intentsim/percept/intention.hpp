#pragma once

#include <string>
#include <vector>

#include "intentsim/grid/types.hpp"

namespace intentsim::percept {

using grid::CellCoord;
using grid::Pose;
using grid::ScalarMap;

/// How other agents' intentions enter the state tensor.
enum class IntentionVariant : uint8_t {
  RampPath,         // waypoint paths, values ramping down with distance
  BinaryPath,       // same cells, constant 1
  StraightLine,     // straight segment to the target, ramped
  TargetCircle,     // radius-2 disc at each target
  PerRobotChannels, // one target-circle channel per other robot, nearest first
  NonspatialTiled,  // two constant channels per robot: ego target x, y
  HistoryMap,       // recent observed poses, recency-weighted
  Predicted,        // ramp-path channel, produced by the predictor at runtime
  None,             // single all-zero channel
};

const char* to_string(IntentionVariant v);
IntentionVariant intention_variant_from_string(const std::string& s);
/// Fixed documented order, used by comparison tables.
const std::vector<IntentionVariant>& all_intention_variants();

/// One other agent's contribution to the intention encoding. For path
/// variants `waypoints` is the remaining committed path (current cell
/// first); for HistoryMap it is the recent pose-cell history, newest last.
struct IntentionRecord {
  int agent_id = 0;
  std::vector<CellCoord> waypoints;
};

struct IntentionEncoding {
  std::vector<ScalarMap> channels;  // egocentric, out_size x out_size
  std::vector<float> tiled_values;  // NonspatialTiled: ego (x, y) per robot in [-1, 1]
  bool tiled = false;
};

/// Intention channel count of the state tensor for a variant and team size.
int intention_channel_count(IntentionVariant v, int team_size);

/// Value ramp shared by the path-shaped variants: 1 at the sender's cell,
/// linear decay normalized by the crop diagonal, floored at 0.1.
grid::RampSpec intention_ramp(int out_size);

/// Renders other agents' intentions into egocentric map channels (or the
/// tiled value list). `frame` is the deciding agent's pose; `grid_width/
/// height` size the global canvas the records live on. Records must not
/// include the deciding agent.
IntentionEncoding encode_intention(const std::vector<IntentionRecord>& records,
                                   IntentionVariant variant, const Pose& frame, int out_size,
                                   int team_size, int grid_width, int grid_height);

}  // namespace intentsim::percept
