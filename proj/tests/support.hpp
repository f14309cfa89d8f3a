#pragma once

// Track and scenario builders shared by the unit tests.

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "instructkit/geometry.hpp"
#include "instructkit/scenario.hpp"

namespace instructkit::test {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data_path(const std::string& name) {
  return std::string(INSTRUCTKIT_DATA_DIR) + "/" + name;
}

/// Points at the given positions; heading follows the next displacement
/// (the last point repeats the previous one), speed is the backward
/// difference (the first point copies the forward one).
inline std::vector<TrajectoryPoint> points_from_xy(const std::vector<std::pair<double, double>>& xy,
                                                   double dt, double heading0 = 0.0) {
  std::vector<TrajectoryPoint> pts(xy.size());
  for (std::size_t i = 0; i < xy.size(); ++i) {
    pts[i].x = xy[i].first;
    pts[i].y = xy[i].second;
    pts[i].t_index = static_cast<int>(i);
  }
  for (std::size_t i = 0; i + 1 < xy.size(); ++i) {
    const double dx = xy[i + 1].first - xy[i].first;
    const double dy = xy[i + 1].second - xy[i].second;
    const double d = std::hypot(dx, dy);
    pts[i + 1].speed = d / dt;
    pts[i].heading = d > 0 ? wrap_angle(std::atan2(dy, dx)) : (i ? pts[i - 1].heading : heading0);
  }
  if (xy.size() > 1) {
    pts[0].speed = pts[1].speed;
    pts.back().heading = pts[pts.size() - 2].heading;
  }
  return pts;
}

/// `n` samples of a parametric curve at t = 0 .. n-1.
inline std::vector<std::pair<double, double>> sample_curve(
    int n, const std::function<std::pair<double, double>(int)>& f) {
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(f(i));
  return out;
}

/// Full-horizon track whose future follows `future_xy` (t_pred + 1 samples starting at the present).
inline AgentTrack track_with_future(const std::vector<std::pair<double, double>>& future_xy,
                                    const HorizonConfig& h, std::string id = "ego") {
  // The past extends the first future displacement backwards.
  const auto [x0, y0] = future_xy.front();
  const double dx = future_xy.size() > 1 ? future_xy[1].first - x0 : 0.0;
  const double dy = future_xy.size() > 1 ? future_xy[1].second - y0 : 0.0;
  std::vector<std::pair<double, double>> all;
  for (int k = h.t_obs - 1; k > 0; --k) all.push_back({x0 - k * dx, y0 - k * dy});
  all.insert(all.end(), future_xy.begin(), future_xy.end());
  AgentTrack t;
  t.agent_id = std::move(id);
  t.points = points_from_xy(all, h.dt);
  return t;
}

inline Lane straight_lane(std::string id, double x0, double y0, double heading, double length,
                          double spacing = 2.0) {
  Lane lane;
  lane.lane_id = std::move(id);
  const int n = static_cast<int>(std::round(length / spacing));
  for (int i = 0; i <= n; ++i) {
    lane.centerline.push_back({x0 + i * spacing * std::cos(heading),
                               y0 + i * spacing * std::sin(heading), heading});
  }
  return lane;
}

/// Rigid motion of every point of a track (positions and headings).
inline AgentTrack transformed(const AgentTrack& t, double phi, double tx, double ty) {
  AgentTrack out = t;
  const double c = std::cos(phi), s = std::sin(phi);
  for (auto& p : out.points) {
    const double x = p.x, y = p.y;
    p.x = c * x - s * y + tx;
    p.y = s * x + c * y + ty;
    p.heading = wrap_angle(p.heading + phi);
  }
  return out;
}

/// Reflection across the line through the first point along its heading.
inline AgentTrack mirrored(const AgentTrack& t, int axis_step) {
  AgentTrack out = t;
  const auto& a = t.points[static_cast<std::size_t>(axis_step)];
  const EgoFrame frame({a.x, a.y, a.heading});
  for (auto& p : out.points) {
    const auto e = frame.transform(p.x, p.y, p.heading);
    const auto m = frame.to_map(e.lon, -e.lat, -e.rel_heading);
    p.x = m.x;
    p.y = m.y;
    p.heading = wrap_angle(m.heading);
  }
  return out;
}

}  // namespace instructkit::test
