#pragma once

#include "relaycc/relay_gain.hpp"

namespace relaycc {

/// Bounds and gain for one (mode, params) point.
SweepRow evaluate_row(RelayMode mode, const ChannelParams& params,
                      const ConstellationSpec& constellations, const McConfig& cfg,
                      const BoundOptions& opts);

}  // namespace relaycc
