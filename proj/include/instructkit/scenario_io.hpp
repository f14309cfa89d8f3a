#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "instructkit/metrics.hpp"
#include "instructkit/scenario.hpp"

namespace instructkit {

/// Parses and validates one scenario JSON document. Unknown keys are rejected.
/// Throws SchemaError, ReferenceError or GeometryError.
Scenario parse_scenario(std::string_view text);
Scenario scenario_from_json(const nlohmann::json& j);

nlohmann::ordered_json scenario_to_json(const Scenario& scenario);

/// Single-line JSON, suitable for one JSONL record.
std::string serialize_scenario(const Scenario& scenario);

HorizonConfig horizon_from_json(const nlohmann::json& j);
nlohmann::ordered_json horizon_to_json(const HorizonConfig& horizon);

/// Prediction record:
///   {"scenario_id", "direction"? | "behavior"?, "decision"?,
///    "trajectories": [[[x, y] | null, ...], ...], "scores": [...],
///    "score_kind"?: "logits" | "probabilities",
///    "gmm"?: [[[mu_x, mu_y, sigma_x, sigma_y], ...], ...],
///    "origin"?: {"x", "y", "heading", "speed"},
///    "ground_truth"?: [[x, y] | null, ...]}
/// null marks an invalid step.
XYTrajectory xy_trajectory_from_json(const nlohmann::json& j);
nlohmann::ordered_json xy_trajectory_to_json(const XYTrajectory& trajectory);

/// 64-bit FNV-1a of a byte string, rendered as "fnv1a64:<16 hex digits>".
std::string content_hash(std::string_view bytes);

}  // namespace instructkit
