#include "instructkit/geometry.hpp"

#include <cmath>

#include "instructkit/errors.hpp"

namespace instructkit {

double wrap_angle(double radians) noexcept {
  double r = std::remainder(radians, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

EgoFrame::EgoFrame(const Pose2& anchor) noexcept
    : anchor_(anchor), cos_(std::cos(anchor.heading)), sin_(std::sin(anchor.heading)) {}

EgoPoint EgoFrame::transform(double x, double y, double heading) const noexcept {
  const double dx = x - anchor_.x;
  const double dy = y - anchor_.y;
  return {.lon = cos_ * dx + sin_ * dy,
          .lat = -sin_ * dx + cos_ * dy,
          .rel_heading = wrap_angle(heading - anchor_.heading)};
}

Pose2 EgoFrame::to_map(double lon, double lat, double rel_heading) const noexcept {
  return {.x = anchor_.x + cos_ * lon - sin_ * lat,
          .y = anchor_.y + sin_ * lon + cos_ * lat,
          .heading = wrap_angle(anchor_.heading + rel_heading)};
}

std::vector<EgoPoint> to_ego_frame(const AgentTrack& track, int anchor_step) {
  if (anchor_step < 0 || anchor_step >= static_cast<int>(track.points.size())) {
    throw InvalidAnchor("anchor step " + std::to_string(anchor_step) + " out of range");
  }
  const auto& a = track.points[static_cast<std::size_t>(anchor_step)];
  if (!a.valid) {
    throw InvalidAnchor("anchor step " + std::to_string(anchor_step) + " is not valid");
  }
  const EgoFrame frame({a.x, a.y, a.heading});
  std::vector<EgoPoint> out;
  out.reserve(track.points.size());
  for (const auto& p : track.points) out.push_back(frame.transform(p.x, p.y, p.heading));
  return out;
}

std::vector<double> infer_headings(std::span<const TrajectoryPoint> points, double epsilon_disp) {
  std::vector<double> headings(points.size());
  if (points.empty()) return headings;
  double carried = points.front().heading;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (k + 1 < points.size()) {
      const double dx = points[k + 1].x - points[k].x;
      const double dy = points[k + 1].y - points[k].y;
      if (std::hypot(dx, dy) > epsilon_disp) carried = std::atan2(dy, dx);
    }
    headings[k] = carried;
  }
  return headings;
}

double path_length(std::span<const TrajectoryPoint> points) noexcept {
  double total = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k) {
    total += std::hypot(points[k].x - points[k - 1].x, points[k].y - points[k - 1].y);
  }
  return total;
}

}  // namespace instructkit
