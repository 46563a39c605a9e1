#pragma once

#include <string>
#include <vector>

#include "manetsim/mobility.hpp"

namespace manet {

/// Serialize trajectories in the NS-2 movement-trace dialect:
///   $node_(<i>) set X_ <f>   (and Y_, Z_ 0.000000)
///   $ns_ at <t> "$node_(<i>) setdest <x> <y> <speed>"
/// Reals at 6 decimal places, initial positions grouped by node index,
/// setdest statements ordered by time (ties by node index).
std::string export_ns2_trace(const std::vector<TrackHistory>& histories);

/// Parse the dialect above back into trajectories. Arrival times are
/// recomputed from (origin, destination, speed) with the same arithmetic the
/// generator uses, so positions round-trip losslessly.
std::vector<TrackHistory> parse_ns2_trace(const std::string& text);

}  // namespace manet
