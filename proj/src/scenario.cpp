#include "instructkit/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "instructkit/errors.hpp"

namespace instructkit {

namespace {

constexpr std::array<std::string_view, 4> kAgentKindNames{"vehicle", "pedestrian", "cyclist",
                                                          "other"};

void check_track(const AgentTrack& track, const HorizonConfig& horizon) {
  const auto where = "agent '" + track.agent_id + "'";
  if (track.agent_id.empty()) throw SchemaError("agent_id must not be empty");
  if (static_cast<int>(track.points.size()) != horizon.total_steps()) {
    throw SchemaError(where + ": expected " + std::to_string(horizon.total_steps()) +
                      " points, got " + std::to_string(track.points.size()));
  }
  for (std::size_t i = 0; i < track.points.size(); ++i) {
    const auto& p = track.points[i];
    if (i > 0 && p.t_index != track.points[i - 1].t_index + 1) {
      throw GeometryError(where + ": t_index not increasing by 1 at point " + std::to_string(i));
    }
    if (!p.valid) continue;
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.heading) ||
        !std::isfinite(p.speed)) {
      throw GeometryError(where + ": non-finite value at point " + std::to_string(i));
    }
    if (p.speed < 0.0) {
      throw GeometryError(where + ": negative speed at point " + std::to_string(i));
    }
    if (!(p.heading > -std::numbers::pi && p.heading <= std::numbers::pi)) {
      throw GeometryError(where + ": heading outside (-pi, pi] at point " + std::to_string(i));
    }
  }
}

void check_lane(const Lane& lane) {
  const auto where = "lane '" + lane.lane_id + "'";
  if (lane.lane_id.empty()) throw SchemaError("lane_id must not be empty");
  if (lane.centerline.size() < 2) {
    throw GeometryError(where + ": centerline needs at least 2 points");
  }
  for (std::size_t i = 0; i < lane.centerline.size(); ++i) {
    const auto& p = lane.centerline[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.heading)) {
      throw GeometryError(where + ": non-finite centerline value at " + std::to_string(i));
    }
    if (i > 0) {
      const auto& q = lane.centerline[i - 1];
      if (p.x == q.x && p.y == q.y) {
        throw GeometryError(where + ": repeated centerline point at " + std::to_string(i));
      }
    }
  }
  if (lane.speed_limit_kmh && !(*lane.speed_limit_kmh >= 0.0)) {
    throw GeometryError(where + ": speed limit must be non-negative");
  }
}

}  // namespace

void HorizonConfig::validate() const {
  if (t_obs < 2) throw SchemaError("horizon.t_obs must be at least 2");
  if (t_pred < 2) throw SchemaError("horizon.t_pred must be at least 2");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw SchemaError("horizon.dt must be positive");
  for (int s : t_select) {
    if (s < 0 || s >= t_pred) {
      throw SchemaError("horizon.t_select entry " + std::to_string(s) + " outside [0, t_pred)");
    }
  }
}

std::string_view to_string(AgentKind kind) noexcept {
  return kAgentKindNames[static_cast<std::size_t>(kind)];
}

std::optional<AgentKind> agent_kind_from_string(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kAgentKindNames.size(); ++i) {
    if (kAgentKindNames[i] == name) return static_cast<AgentKind>(i);
  }
  return std::nullopt;
}

const AgentTrack* Scenario::find_agent(std::string_view agent_id) const noexcept {
  for (const auto& a : agents) {
    if (a.agent_id == agent_id) return &a;
  }
  return nullptr;
}

const Lane* Scenario::find_lane(std::string_view lane_id) const noexcept {
  for (const auto& l : lanes) {
    if (l.lane_id == lane_id) return &l;
  }
  return nullptr;
}

const AgentTrack& Scenario::focal() const {
  const auto* agent = find_agent(focal_agent_id);
  if (agent == nullptr) {
    throw ReferenceError("focal_agent_id '" + focal_agent_id + "' does not name an agent");
  }
  return *agent;
}

void validate_scenario(const Scenario& scenario) {
  if (scenario.scenario_id.empty()) throw SchemaError("scenario_id must not be empty");
  scenario.horizon.validate();

  std::set<std::string_view> agent_ids;
  for (const auto& agent : scenario.agents) {
    check_track(agent, scenario.horizon);
    if (!agent_ids.insert(agent.agent_id).second) {
      throw ReferenceError("duplicate agent_id '" + agent.agent_id + "'");
    }
  }
  if (!agent_ids.contains(scenario.focal_agent_id)) {
    throw ReferenceError("focal_agent_id '" + scenario.focal_agent_id +
                         "' does not name an agent");
  }

  std::set<std::string_view> lane_ids;
  for (const auto& lane : scenario.lanes) {
    check_lane(lane);
    if (!lane_ids.insert(lane.lane_id).second) {
      throw ReferenceError("duplicate lane_id '" + lane.lane_id + "'");
    }
  }
  auto resolve = [&](const Lane& lane, const std::string& ref, std::string_view role) {
    if (!lane_ids.contains(ref)) {
      throw ReferenceError("lane '" + lane.lane_id + "': " + std::string(role) + " '" + ref +
                           "' does not name a lane");
    }
  };
  for (const auto& lane : scenario.lanes) {
    for (const auto& s : lane.successors) resolve(lane, s, "successor");
    if (lane.left_neighbor) resolve(lane, *lane.left_neighbor, "left_neighbor");
    if (lane.right_neighbor) resolve(lane, *lane.right_neighbor, "right_neighbor");
  }
}

std::vector<TrajectoryPoint> valid_points(const AgentTrack& track, int first, int last) {
  std::vector<TrajectoryPoint> out;
  const int n = static_cast<int>(track.points.size());
  first = std::max(first, 0);
  last = std::min(last, n - 1);
  for (int i = first; i <= last; ++i) {
    if (track.points[static_cast<std::size_t>(i)].valid) {
      out.push_back(track.points[static_cast<std::size_t>(i)]);
    }
  }
  return out;
}

}  // namespace instructkit
