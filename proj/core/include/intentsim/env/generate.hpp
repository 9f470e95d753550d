#pragma once

#include "intentsim/env/spec.hpp"

namespace intentsim::env {

/// Builds a randomized world for (spec, seed): boundary ring, layout
/// obstacles with randomized placements, receptacle (foraging), and
/// non-overlapping agent/object spawns. Deterministic in (spec, seed).
/// Regenerates internally with an incremented sub-seed until every object
/// (and the receptacle, for foraging) is reachable from every robot spawn;
/// throws after too many attempts or when entities outnumber free cells.
WorldState generate_environment(const EnvironmentSpec& spec, uint64_t seed);

}  // namespace intentsim::env
