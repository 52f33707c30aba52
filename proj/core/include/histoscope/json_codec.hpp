#pragma once

#include <json.hpp>

#include "histoscope/histogram.hpp"
#include "histoscope/workspace.hpp"

namespace histoscope::json {

/// The six range quantities; an undefined mean becomes null. Numbers keep full
/// double precision.
nlohmann::json stats_to_json(const RangeStatistics& stats);

/// Layer identity: index, name, size, depth, palette color and histogram summary.
nlohmann::json layer_to_json(const WorkspaceState& ws, std::size_t index);

/// Scale, y-limit, range and layers.
nlohmann::json workspace_to_json(const WorkspaceState& ws);

/// Dense counts for 8-bit; run-length pairs [count, run] for 16-bit.
nlohmann::json histogram_to_json(const Histogram& hist);

/// Inverse of histogram_to_json; used by clients and tests.
Histogram histogram_from_json(const nlohmann::json& j);

}  // namespace histoscope::json
