#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "semiflow/bundle.hpp"
#include "semiflow/fluid.hpp"
#include "semiflow/selection.hpp"
#include "semiflow/skorokhod.hpp"
#include "semiflow/trajectory.hpp"

namespace semiflow::io {

using Json = nlohmann::json;

// Trajectory:
//   {"dim", "initial_value", "right_limit_0", "breakpoints", "segments",
//    "right_limits", "tail"}
// `breakpoints` starts with t_0 = 0; `segments[j]` covers (t_j, t_{j+1}];
// `right_limits[j]` is the right limit at t_{j+1}. Stored right limits must
// agree with the segments.
Json to_json(const Trajectory& phi);
Trajectory trajectory_from_json(const Json& j);

// Bundle:
//   {"dim", "quantum", "time_grid", "energy_index", "horizon",
//    "entries": [{"key", "trajectories"}]}
// `energy_index` and `horizon` may be null or absent.
Json to_json(const Bundle& bundle);
Bundle bundle_from_json(const Json& j);

Json to_json(const MetricReport& report);
Json to_json(const TraceRecord& record);
Json to_json(const Violation& violation);

// {"L", "cells", "rho", "m", "E", "a", "gamma"}; optional "trace_constant".
std::pair<FluidState, PressureLaw> fluid_from_json(const Json& j);
Json to_json(const FluidState& state, const PressureLaw& law);

/// Compact single-line dump, the canonical text of a value.
std::string dump(const Json& j);

Json parse(std::string_view text);
Json read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace semiflow::io
