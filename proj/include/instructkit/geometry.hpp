#pragma once

#include <numbers>
#include <span>
#include <vector>

#include "instructkit/scenario.hpp"

namespace instructkit {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDefaultEpsilonDisp = 0.05;  // m
inline constexpr double kKmhPerMps = 3.6;

/// Wraps an angle into (-pi, pi].
double wrap_angle(double radians) noexcept;

inline constexpr double deg_to_rad(double deg) noexcept { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / kPi; }

struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
};

/// Longitudinal / lateral offsets relative to an anchor pose. +lat is left of travel.
struct EgoPoint {
  double lon = 0.0;
  double lat = 0.0;
  double rel_heading = 0.0;
};

/// Rigid transform into the frame of an anchor pose.
class EgoFrame {
 public:
  explicit EgoFrame(const Pose2& anchor) noexcept;

  EgoPoint transform(double x, double y, double heading) const noexcept;
  EgoPoint transform(double x, double y) const noexcept { return transform(x, y, anchor_.heading); }

  /// Inverse transform back to the map frame.
  Pose2 to_map(double lon, double lat, double rel_heading) const noexcept;

  const Pose2& anchor() const noexcept { return anchor_; }

 private:
  Pose2 anchor_;
  double cos_;
  double sin_;
};

/// Every point of `track` expressed in the frame of points[anchor_step],
/// using that point's recorded heading. Throws InvalidAnchor if the anchor
/// index is out of range or the anchor point is invalid.
std::vector<EgoPoint> to_ego_frame(const AgentTrack& track, int anchor_step);

/// Per-point heading from consecutive displacements. heading[k] is the
/// direction from point k to k+1 when that step is longer than
/// `epsilon_disp`; otherwise the previous heading is carried. The first entry
/// falls back to the recorded heading and the last entry always carries.
/// All points are treated as valid; filter beforehand.
std::vector<double> infer_headings(std::span<const TrajectoryPoint> points,
                                   double epsilon_disp = kDefaultEpsilonDisp);

/// Sum of segment lengths along the points.
double path_length(std::span<const TrajectoryPoint> points) noexcept;

}  // namespace instructkit
