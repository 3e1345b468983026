#pragma once

// JSON form of measures:
//   {"atoms": [[[x1, ...], w], ...],
//    "density": {"variant": "Separable", "factors": [[{"kind": "exponential", "rate": 1}], ...], "scale": 1}}
// Box: {"variant": "Box", "corner": [...], "lower": [...], "value": v}
// GridSampled: {"variant": "GridSampled", "grid": [{"u_min": a, "u_max": b, "N": n}, ...], "values": [...]}
// Callback densities have no JSON form.

#include <nlohmann/json.hpp>

#include "cesradon/log_grid.hpp"
#include "cesradon/measures.hpp"

namespace cesradon {

nlohmann::json density_to_json(const DensitySpec& d);
DensitySpec density_from_json(const nlohmann::json& j);

nlohmann::json measure_to_json(const MeasureModel& m);
MeasureModel measure_from_json(const nlohmann::json& j);

nlohmann::json grid_to_json(const LogGrid& g);
LogGrid grid_from_json(const nlohmann::json& j);

}  // namespace cesradon
