#pragma once

// Scenario data model: agent tracks sampled on a fixed time grid plus a
// vectorized lane graph. Values are plain aggregates; validation lives in
// validate_scenario() and runs on every parse.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace instructkit {

struct TrajectoryPoint {
  double x = 0.0;        // m, map frame
  double y = 0.0;        // m
  double heading = 0.0;  // rad, (-pi, pi]
  double speed = 0.0;    // m/s
  bool valid = true;
  int t_index = 0;  // step on the dt grid

  friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

struct HorizonConfig {
  int t_obs = 11;
  int t_pred = 80;
  std::vector<int> t_select{29, 49, 79};
  double dt = 0.1;

  /// Index of the present pose inside AgentTrack::points.
  int current_step() const noexcept { return t_obs - 1; }
  int last_step() const noexcept { return t_obs + t_pred - 1; }
  int total_steps() const noexcept { return t_obs + t_pred; }
  double future_duration() const noexcept { return t_pred * dt; }

  /// Throws SchemaError when an invariant does not hold.
  void validate() const;

  friend bool operator==(const HorizonConfig&, const HorizonConfig&) = default;
};

enum class AgentKind { kVehicle, kPedestrian, kCyclist, kOther };

std::string_view to_string(AgentKind kind) noexcept;
std::optional<AgentKind> agent_kind_from_string(std::string_view name) noexcept;

struct AgentTrack {
  std::string agent_id;
  AgentKind kind = AgentKind::kVehicle;
  std::vector<TrajectoryPoint> points;

  friend bool operator==(const AgentTrack&, const AgentTrack&) = default;
};

struct LanePoint {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  friend bool operator==(const LanePoint&, const LanePoint&) = default;
};

struct Lane {
  std::string lane_id;
  std::vector<LanePoint> centerline;
  std::optional<double> speed_limit_kmh;
  std::vector<std::string> successors;
  std::optional<std::string> left_neighbor;
  std::optional<std::string> right_neighbor;

  friend bool operator==(const Lane&, const Lane&) = default;
};

struct Scenario {
  std::string scenario_id;
  std::string focal_agent_id;
  std::optional<std::string> scenario_type;
  HorizonConfig horizon;
  std::vector<AgentTrack> agents;
  std::vector<Lane> lanes;

  const AgentTrack* find_agent(std::string_view agent_id) const noexcept;
  const Lane* find_lane(std::string_view lane_id) const noexcept;

  /// The focal agent; throws ReferenceError when it does not resolve.
  const AgentTrack& focal() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Checks every structural invariant of the data model.
/// Throws SchemaError, ReferenceError or GeometryError.
void validate_scenario(const Scenario& scenario);

/// Valid points of `track` whose index lies in [first, last].
std::vector<TrajectoryPoint> valid_points(const AgentTrack& track, int first, int last);

}  // namespace instructkit
