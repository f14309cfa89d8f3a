#pragma once

#include <array>
#include <span>

#include "instructkit/geometry.hpp"
#include "instructkit/labels.hpp"
#include "instructkit/scenario.hpp"

namespace instructkit {

struct DirectionThresholds {
  double v_stationary = 2.0;  // m/s
  double d_stationary = 5.0;  // m
  double theta_s_deg = 30.0;
  double d_v = 5.0;  // m, lateral shift that turns a straight into a veer
  double d_u = 5.0;  // m, opposite-side lateral shift that turns a turn into a U-turn

  void validate() const;  // throws ConfigError
};

/// Upper bounds (km/h) of VerySlow, Slow, Moderate and Fast; half-open bands.
struct SpeedThresholds {
  std::array<double, 4> upper_kmh{20.0, 40.0, 90.0, 120.0};
  void validate() const;
};

/// Magnitude bounds (km/h gained or lost over 8 s) of Constant, Mild, Moderate
/// and Aggressive; anything at or above the last bound is Extreme.
struct AccelThresholds {
  std::array<double, 4> bounds_kmh{6.0, 25.0, 46.0, 65.0};
  void validate() const;
};

/// Fine-to-coarse direction folding table.
struct CollapseMap {
  std::array<DirectionLabel, kFineDirectionCount> to_coarse{
      DirectionLabel::kStationary, DirectionLabel::kStraight, DirectionLabel::kStraight,
      DirectionLabel::kStraight,   DirectionLabel::kLeft,     DirectionLabel::kRight,
      DirectionLabel::kLeftUTurn,  DirectionLabel::kRight};
};

struct AttributeConfig {
  DirectionThresholds direction;
  SpeedThresholds speed;
  AccelThresholds accel;
  CollapseMap collapse;
  double epsilon_disp = kDefaultEpsilonDisp;
};

/// Reference duration of the acceleration table; shorter windows are rescaled to it.
inline constexpr double kAccelReferenceSeconds = 8.0;

/// Inclusive range of point indices inside AgentTrack::points.
struct StepWindow {
  int start = 0;
  int end = 0;
};

/// The window from the present pose to the last future step.
StepWindow future_window(const HorizonConfig& horizon) noexcept;

/// Direction of a displacement given its heading change and lateral offset
/// (steps 3 and 4 of the classifier; the stationary test is not applied).
FineDirection classify_displacement(double delta_heading, double lat,
                                    const DirectionThresholds& th) noexcept;

/// Direction of a sequence of valid points, first point = window start.
/// Throws InsufficientPoints for fewer than two points.
FineDirection classify_direction_fine(std::span<const TrajectoryPoint> points,
                                      const DirectionThresholds& th,
                                      double epsilon_disp = kDefaultEpsilonDisp);

/// Direction of the valid points of `track` inside `window`.
FineDirection classify_direction_fine(const AgentTrack& track, StepWindow window,
                                      const DirectionThresholds& th,
                                      double epsilon_disp = kDefaultEpsilonDisp);

DirectionLabel collapse_direction(FineDirection fine, const CollapseMap& map = {}) noexcept;

/// Throws NegativeSpeed for negative input.
SpeedCategory classify_speed(double mean_speed_kmh, const SpeedThresholds& th = {});

AccelCategory classify_acceleration(double delta_v_kmh, const AccelThresholds& th = {}) noexcept;

struct StepAttributes {
  DirectionLabel direction = DirectionLabel::kStationary;
  SpeedCategory speed = SpeedCategory::kVerySlow;
  AccelCategory accel = AccelCategory::kConstant;

  friend bool operator==(const StepAttributes&, const StepAttributes&) = default;
};

struct TwoStep {
  StepAttributes first;
  StepAttributes second;

  friend bool operator==(const TwoStep&, const TwoStep&) = default;
};

/// Mean valid speed over the points, km/h.
double mean_speed_kmh(std::span<const TrajectoryPoint> points) noexcept;

/// Signed speed change between first and last point, km/h, rescaled to the
/// 8 s reference duration.
double normalized_delta_v_kmh(std::span<const TrajectoryPoint> points, double dt) noexcept;

/// Direction, speed and acceleration of a sequence of valid points.
StepAttributes classify_step(std::span<const TrajectoryPoint> points, double dt,
                             const AttributeConfig& cfg);

/// Splits the future window at its midpoint and classifies each half.
TwoStep classify_two_step(const AgentTrack& track, const HorizonConfig& horizon,
                          const AttributeConfig& cfg = {});

struct MotionAttributes {
  FineDirection fine = FineDirection::kStationary;
  DirectionLabel direction = DirectionLabel::kStationary;
  SpeedCategory speed = SpeedCategory::kVerySlow;
  AccelCategory accel = AccelCategory::kConstant;
  double mean_speed_kmh = 0.0;
  double delta_v_kmh = 0.0;
  TwoStep two_step;
};

/// Everything above for the full future window of `track`.
MotionAttributes extract_attributes(const AgentTrack& track, const HorizonConfig& horizon,
                                    const AttributeConfig& cfg = {});

}  // namespace instructkit
