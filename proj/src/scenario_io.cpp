#include "instructkit/scenario_io.hpp"

#include <cstdint>
#include <cstdio>

#include "instructkit/errors.hpp"
#include "json_reader.hpp"

namespace instructkit {

using nlohmann::json;
using nlohmann::ordered_json;
using Reader = detail::ObjectReader<SchemaError>;

HorizonConfig horizon_from_json(const json& j) {
  Reader r(j, "horizon");
  HorizonConfig h;
  h.t_obs = r.integer("t_obs");
  h.t_pred = r.integer("t_pred");
  h.dt = r.number("dt");
  const auto& sel = Reader::as_array(r.required("t_select"), r.child("t_select"));
  h.t_select.clear();
  for (const auto& s : sel) h.t_select.push_back(Reader::as_int(s, r.child("t_select")));
  r.finish();
  h.validate();
  return h;
}

ordered_json horizon_to_json(const HorizonConfig& h) {
  ordered_json j;
  j["t_obs"] = h.t_obs;
  j["t_pred"] = h.t_pred;
  j["t_select"] = h.t_select;
  j["dt"] = h.dt;
  return j;
}

namespace {

TrajectoryPoint point_from_json(const json& j, const std::string& where) {
  Reader r(j, where);
  TrajectoryPoint p;
  p.t_index = r.integer("t");
  p.x = r.number("x");
  p.y = r.number("y");
  p.heading = r.number("heading");
  p.speed = r.number("speed");
  p.valid = r.boolean("valid");
  r.finish();
  return p;
}

AgentTrack agent_from_json(const json& j, const std::string& where) {
  Reader r(j, where);
  AgentTrack a;
  a.agent_id = r.string("agent_id");
  const auto kind_name = r.string("agent_kind");
  const auto kind = agent_kind_from_string(kind_name);
  if (!kind) throw SchemaError(r.child("agent_kind") + ": unknown kind '" + kind_name + "'");
  a.kind = *kind;
  const auto& pts = Reader::as_array(r.required("points"), r.child("points"));
  a.points.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    a.points.push_back(point_from_json(pts[i], r.child("points") + "[" + std::to_string(i) + "]"));
  }
  r.finish();
  return a;
}

Lane lane_from_json(const json& j, const std::string& where) {
  Reader r(j, where);
  Lane lane;
  lane.lane_id = r.string("lane_id");
  if (const auto* v = r.optional("speed_limit_kmh")) {
    lane.speed_limit_kmh = Reader::as_number(*v, r.child("speed_limit_kmh"));
  }
  for (const auto& s : Reader::as_array(r.required("successors"), r.child("successors"))) {
    lane.successors.push_back(Reader::as_string(s, r.child("successors")));
  }
  if (const auto* v = r.optional("left_neighbor")) {
    lane.left_neighbor = Reader::as_string(*v, r.child("left_neighbor"));
  }
  if (const auto* v = r.optional("right_neighbor")) {
    lane.right_neighbor = Reader::as_string(*v, r.child("right_neighbor"));
  }
  const auto& cl = Reader::as_array(r.required("centerline"), r.child("centerline"));
  lane.centerline.reserve(cl.size());
  for (std::size_t i = 0; i < cl.size(); ++i) {
    Reader pr(cl[i], r.child("centerline") + "[" + std::to_string(i) + "]");
    lane.centerline.push_back({pr.number("x"), pr.number("y"), pr.number("heading")});
    pr.finish();
  }
  r.finish();
  return lane;
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  Reader r(j, "scenario");
  Scenario s;
  s.scenario_id = r.string("scenario_id");
  s.focal_agent_id = r.string("focal_agent_id");
  if (const auto* v = r.optional("scenario_type")) {
    s.scenario_type = Reader::as_string(*v, r.child("scenario_type"));
  }
  s.horizon = horizon_from_json(r.required("horizon"));
  const auto& agents = Reader::as_array(r.required("agents"), r.child("agents"));
  s.agents.reserve(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    s.agents.push_back(agent_from_json(agents[i], "agents[" + std::to_string(i) + "]"));
  }
  const auto& lanes = Reader::as_array(r.required("lanes"), r.child("lanes"));
  s.lanes.reserve(lanes.size());
  for (std::size_t i = 0; i < lanes.size(); ++i) {
    s.lanes.push_back(lane_from_json(lanes[i], "lanes[" + std::to_string(i) + "]"));
  }
  r.finish();
  validate_scenario(s);
  return s;
}

Scenario parse_scenario(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

ordered_json scenario_to_json(const Scenario& s) {
  ordered_json j;
  j["scenario_id"] = s.scenario_id;
  j["focal_agent_id"] = s.focal_agent_id;
  if (s.scenario_type) j["scenario_type"] = *s.scenario_type;
  j["horizon"] = horizon_to_json(s.horizon);
  ordered_json agents = ordered_json::array();
  for (const auto& a : s.agents) {
    ordered_json aj;
    aj["agent_id"] = a.agent_id;
    aj["agent_kind"] = std::string(to_string(a.kind));
    ordered_json pts = ordered_json::array();
    for (const auto& p : a.points) {
      ordered_json pj;
      pj["t"] = p.t_index;
      pj["x"] = p.x;
      pj["y"] = p.y;
      pj["heading"] = p.heading;
      pj["speed"] = p.speed;
      pj["valid"] = p.valid;
      pts.push_back(std::move(pj));
    }
    aj["points"] = std::move(pts);
    agents.push_back(std::move(aj));
  }
  j["agents"] = std::move(agents);
  ordered_json lanes = ordered_json::array();
  for (const auto& l : s.lanes) {
    ordered_json lj;
    lj["lane_id"] = l.lane_id;
    if (l.speed_limit_kmh) lj["speed_limit_kmh"] = *l.speed_limit_kmh;
    lj["successors"] = l.successors;
    if (l.left_neighbor) lj["left_neighbor"] = *l.left_neighbor;
    if (l.right_neighbor) lj["right_neighbor"] = *l.right_neighbor;
    ordered_json cl = ordered_json::array();
    for (const auto& p : l.centerline) {
      ordered_json pj;
      pj["x"] = p.x;
      pj["y"] = p.y;
      pj["heading"] = p.heading;
      cl.push_back(std::move(pj));
    }
    lj["centerline"] = std::move(cl);
    lanes.push_back(std::move(lj));
  }
  j["lanes"] = std::move(lanes);
  return j;
}

std::string serialize_scenario(const Scenario& scenario) {
  return scenario_to_json(scenario).dump();
}

XYTrajectory xy_trajectory_from_json(const json& j) {
  if (!j.is_array()) throw SchemaError("trajectory: expected an array");
  XYTrajectory out;
  out.reserve(j.size());
  for (const auto& p : j) {
    if (p.is_null()) {
      out.push_back({0.0, 0.0, false});
      continue;
    }
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw SchemaError("trajectory: each step must be [x, y] or null");
    }
    out.push_back({p[0].get<double>(), p[1].get<double>(), true});
  }
  return out;
}

ordered_json xy_trajectory_to_json(const XYTrajectory& trajectory) {
  ordered_json out = ordered_json::array();
  for (const auto& p : trajectory) {
    if (p.valid) {
      out.push_back(ordered_json::array({p.x, p.y}));
    } else {
      out.push_back(nullptr);
    }
  }
  return out;
}

std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace instructkit
