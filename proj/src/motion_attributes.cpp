#include "instructkit/motion_attributes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "instructkit/errors.hpp"

namespace instructkit {

namespace {

bool positive(double v) { return v > 0.0 && std::isfinite(v); }

template <std::size_t N>
void check_increasing(const std::array<double, N>& bounds, const char* name) {
  for (std::size_t i = 0; i < N; ++i) {
    if (!(bounds[i] > 0.0) || !std::isfinite(bounds[i]) || (i > 0 && bounds[i] <= bounds[i - 1])) {
      throw ConfigError(std::string(name) + " must be positive and strictly increasing");
    }
  }
}

}  // namespace

void DirectionThresholds::validate() const {
  if (!positive(v_stationary) || !positive(d_stationary) || !positive(theta_s_deg) ||
      !positive(d_v) || !positive(d_u)) {
    throw ConfigError("direction thresholds must be strictly positive");
  }
  if (theta_s_deg >= 180.0) throw ConfigError("direction.theta_s must be below 180 degrees");
}

void SpeedThresholds::validate() const { check_increasing(upper_kmh, "speed_thresholds_kmh"); }
void AccelThresholds::validate() const { check_increasing(bounds_kmh, "accel_thresholds_kmh"); }

StepWindow future_window(const HorizonConfig& horizon) noexcept {
  return {horizon.current_step(), horizon.last_step()};
}

FineDirection classify_displacement(double delta_heading, double lat,
                                    const DirectionThresholds& th) noexcept {
  const double theta_s = deg_to_rad(th.theta_s_deg);
  if (std::abs(delta_heading) <= theta_s) {
    if (lat > th.d_v) return FineDirection::kStraightVeerLeft;
    if (lat < -th.d_v) return FineDirection::kStraightVeerRight;
    return FineDirection::kStraight;
  }
  if (delta_heading > 0.0) {
    return lat < -th.d_u ? FineDirection::kLeftUTurn : FineDirection::kLeftTurn;
  }
  return lat > th.d_u ? FineDirection::kRightUTurn : FineDirection::kRightTurn;
}

FineDirection classify_direction_fine(std::span<const TrajectoryPoint> points,
                                      const DirectionThresholds& th, double epsilon_disp) {
  if (points.size() < 2) {
    throw InsufficientPoints("direction needs at least 2 valid points, got " +
                             std::to_string(points.size()));
  }
  double max_speed = 0.0;
  for (const auto& p : points) max_speed = std::max(max_speed, p.speed);
  if (max_speed < th.v_stationary && path_length(points) < th.d_stationary) {
    return FineDirection::kStationary;
  }

  const auto headings = infer_headings(points, epsilon_disp);
  const double delta = wrap_angle(headings.back() - headings.front());
  const EgoFrame frame({points.front().x, points.front().y, headings.front()});
  const auto end = frame.transform(points.back().x, points.back().y);
  return classify_displacement(delta, end.lat, th);
}

FineDirection classify_direction_fine(const AgentTrack& track, StepWindow window,
                                      const DirectionThresholds& th, double epsilon_disp) {
  const int n = static_cast<int>(track.points.size());
  if (window.start < 0 || window.end >= n || window.start > window.end) {
    throw InsufficientPoints("window [" + std::to_string(window.start) + ", " +
                             std::to_string(window.end) + "] outside the track");
  }
  const auto pts = valid_points(track, window.start, window.end);
  return classify_direction_fine(pts, th, epsilon_disp);
}

DirectionLabel collapse_direction(FineDirection fine, const CollapseMap& map) noexcept {
  return map.to_coarse[index_of(fine)];
}

SpeedCategory classify_speed(double mean_speed_kmh, const SpeedThresholds& th) {
  if (mean_speed_kmh < 0.0 || std::isnan(mean_speed_kmh)) {
    throw NegativeSpeed("speed must be non-negative");
  }
  for (std::size_t i = 0; i < th.upper_kmh.size(); ++i) {
    if (mean_speed_kmh < th.upper_kmh[i]) return static_cast<SpeedCategory>(i);
  }
  return SpeedCategory::kVeryFast;
}

AccelCategory classify_acceleration(double delta_v_kmh, const AccelThresholds& th) noexcept {
  const double magnitude = std::abs(delta_v_kmh);
  if (magnitude < th.bounds_kmh[0]) return AccelCategory::kConstant;
  std::size_t band = 3;  // extreme
  for (std::size_t i = 1; i < th.bounds_kmh.size(); ++i) {
    if (magnitude < th.bounds_kmh[i]) {
      band = i - 1;
      break;
    }
  }
  const std::size_t base = delta_v_kmh > 0.0 ? index_of(AccelCategory::kMildAccel)
                                             : index_of(AccelCategory::kMildDecel);
  return static_cast<AccelCategory>(base + band);
}

double mean_speed_kmh(std::span<const TrajectoryPoint> points) noexcept {
  if (points.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& p : points) sum += p.speed;
  return sum / static_cast<double>(points.size()) * kKmhPerMps;
}

double normalized_delta_v_kmh(std::span<const TrajectoryPoint> points, double dt) noexcept {
  if (points.size() < 2) return 0.0;
  const double duration = (points.back().t_index - points.front().t_index) * dt;
  if (!(duration > 0.0)) return 0.0;
  return (points.back().speed - points.front().speed) * kKmhPerMps *
         (kAccelReferenceSeconds / duration);
}

StepAttributes classify_step(std::span<const TrajectoryPoint> points, double dt,
                             const AttributeConfig& cfg) {
  const auto fine = classify_direction_fine(points, cfg.direction, cfg.epsilon_disp);
  return {.direction = collapse_direction(fine, cfg.collapse),
          .speed = classify_speed(mean_speed_kmh(points), cfg.speed),
          .accel = classify_acceleration(normalized_delta_v_kmh(points, dt), cfg.accel)};
}

TwoStep classify_two_step(const AgentTrack& track, const HorizonConfig& horizon,
                          const AttributeConfig& cfg) {
  const auto window = future_window(horizon);
  const int mid = window.start + (window.end - window.start) / 2;
  const auto first = valid_points(track, window.start, mid);
  const auto second = valid_points(track, mid, window.end);
  return {classify_step(first, horizon.dt, cfg), classify_step(second, horizon.dt, cfg)};
}

MotionAttributes extract_attributes(const AgentTrack& track, const HorizonConfig& horizon,
                                    const AttributeConfig& cfg) {
  const auto window = future_window(horizon);
  if (static_cast<int>(track.points.size()) <= window.end) {
    throw InsufficientPoints("track shorter than the horizon");
  }
  const auto pts = valid_points(track, window.start, window.end);
  MotionAttributes out;
  out.fine = classify_direction_fine(pts, cfg.direction, cfg.epsilon_disp);
  out.direction = collapse_direction(out.fine, cfg.collapse);
  out.mean_speed_kmh = mean_speed_kmh(pts);
  out.delta_v_kmh = normalized_delta_v_kmh(pts, horizon.dt);
  out.speed = classify_speed(out.mean_speed_kmh, cfg.speed);
  out.accel = classify_acceleration(out.delta_v_kmh, cfg.accel);
  out.two_step = classify_two_step(track, horizon, cfg);
  return out;
}

}  // namespace instructkit
