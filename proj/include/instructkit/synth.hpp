#pragma once

// Parametric scenario generator with closed-form expected labels.
//
// A trajectory is a path (chain of straight and circular pieces, extended by
// a straight tail) traversed under a piecewise-linear speed profile. Sample
// positions, distances and the expected labels are evaluated in closed form
// from those two objects; the classifiers are never consulted. Where a label
// depends on a quantity lying too close to a threshold to survive sampling,
// the case is marked non-robust and suites skip it.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "instructkit/behavior_safety.hpp"
#include "instructkit/geometry.hpp"
#include "instructkit/labels.hpp"
#include "instructkit/metrics.hpp"
#include "instructkit/motion_attributes.hpp"
#include "instructkit/scenario.hpp"

namespace instructkit::synth {

enum class SynthKind { kStraight, kArc, kStop, kDwellThenGo, kPiecewise, kUTurn };
enum class TurnSide { kLeft, kRight };

std::string_view to_string(SynthKind kind) noexcept;

struct SynthSpec {
  SynthKind kind = SynthKind::kStraight;
  TurnSide side = TurnSide::kLeft;
  double radius = 20.0;     // arc / loop radius, m
  double angle_deg = 90.0;  // arc angle, or net heading change of a U-turn
  /// straight: lateral offset of an S-shaped veer (0 = plain line).
  /// u_turn: radius of the opposite-side swing before the loop.
  double lateral_offset = 0.0;
  double v0 = 10.0;     // m/s at the present step
  double v_mid = 10.0;  // m/s at the middle of the future window
  double v1 = 10.0;     // m/s at the end
  /// stop: time at rest at the end of the window; dwell_then_go: time at rest at the start.
  double dwell_s = 0.0;
  double x0 = 0.0;
  double y0 = 0.0;
  double heading0 = 0.0;
  std::uint64_t seed = 0;
};

struct PathPiece {
  double length = 0.0;     // m
  double curvature = 0.0;  // 1/m, positive turns left
};

/// Arc-length parametrized path starting at the origin heading along +x.
class Path {
 public:
  Path() = default;
  explicit Path(std::vector<PathPiece> pieces);

  /// Pose at arc length s; negative s extends straight backwards, s beyond
  /// the last piece continues on a straight tail.
  Pose2 at(double s) const noexcept;
  double max_abs_curvature() const noexcept { return max_curvature_; }
  const std::vector<PathPiece>& pieces() const noexcept { return pieces_; }

 private:
  std::vector<PathPiece> pieces_;
  std::vector<Pose2> starts_;
  std::vector<double> offsets_;
  double max_curvature_ = 0.0;
};

struct SpeedKnot {
  double t = 0.0;  // s from the present step
  double v = 0.0;  // m/s
};

/// Piecewise-linear speed; constant before the first and after the last knot.
class SpeedProfile {
 public:
  SpeedProfile() = default;
  explicit SpeedProfile(std::vector<SpeedKnot> knots);

  double speed(double t) const noexcept;
  /// Signed distance travelled from t = 0 to t.
  double distance(double t) const noexcept;
  double max_speed(double t0, double t1) const noexcept;
  const std::vector<SpeedKnot>& knots() const noexcept { return knots_; }

 private:
  std::vector<SpeedKnot> knots_;
  std::vector<double> cumulative_;
};

struct ExpectedLabels {
  FineDirection fine = FineDirection::kStationary;
  DirectionLabel direction = DirectionLabel::kStationary;
  SpeedCategory speed = SpeedCategory::kVerySlow;
  AccelCategory accel = AccelCategory::kConstant;
  BehaviorLabel behavior = BehaviorLabel::kNotMoving;
  /// True when every full-window label clears its threshold margin.
  bool robust = false;
  /// Present only when both halves are robust too.
  std::optional<TwoStep> two_step;
};

struct SynthTrajectory {
  AgentTrack track;
  ExpectedLabels expected;
};

Path build_path(const SynthSpec& spec, const HorizonConfig& horizon);
SpeedProfile build_profile(const SynthSpec& spec, const HorizonConfig& horizon);

/// Throws InvalidSpec for non-positive geometry, angles outside (0, 200],
/// negative speeds or dwell times off the dt grid.
void validate_spec(const SynthSpec& spec, const HorizonConfig& horizon);

/// Sampled track (agent id "ego") plus analytic labels.
SynthTrajectory gen_trajectory(const SynthSpec& spec, const HorizonConfig& horizon = {},
                               const AttributeConfig& cfg = {},
                               const BehaviorParams& behavior = {});

enum class LaneTopology { kSingle, kTJunction, kParallelPair, kULoop };
inline constexpr std::array<LaneTopology, 4> kAllTopologies{
    LaneTopology::kSingle, LaneTopology::kTJunction, LaneTopology::kParallelPair,
    LaneTopology::kULoop};

std::string_view to_string(LaneTopology topology) noexcept;
std::optional<LaneTopology> topology_from_string(std::string_view name) noexcept;

/// Fixed lane maps around an ego at the origin heading +x:
///  single        one straight lane.
///  t_junction    approach lane ending at x = 20 with a left and a right branch
///                (radius 10 m quarter circles).
///  parallel_pair two straight lanes 3.5 m apart wired as neighbors; the ego is
///                on the right one.
///  u_loop        approach lane with a straight continuation and a loop ramp
///                that swings right (radius 12 m, 90 deg) and then loops left
///                (radius 5 m, 270 deg) to head back the other way.
std::vector<Lane> gen_lane_graph(LaneTopology topology);

/// Directions the lane geometry alone makes reachable, assuming the
/// reachable range is at least kExpectedFeasibleMinRange.
///  single, parallel_pair: {Straight}; t_junction: {Straight, Left, Right};
///  u_loop: {Straight, Right, LeftUTurn}.
std::set<DirectionLabel> expected_lane_directions(LaneTopology topology);
inline constexpr double kExpectedFeasibleMinRange = 45.0;

/// Scenario with the synthetic trajectory as focal agent "ego", a standing
/// pedestrian "ped", and the lanes of `topology`.
Scenario gen_scenario(std::string scenario_id, const SynthTrajectory& trajectory,
                      LaneTopology topology, const HorizonConfig& horizon,
                      std::optional<std::string> scenario_type = std::nullopt);

enum class Perturbation { kNone, kJitter };

struct SynthPredictions {
  PredictionSet set;
  std::vector<DirectionLabel> expected;  // per mode
};

/// `modes` futures of which exactly `match_count` keep the ground-truth
/// direction. Non-matching modes are the ground truth mirrored across its
/// initial heading when that changes the coarse label, otherwise a fixed
/// left turn (for straight) or a straight run (for stationary).
/// kJitter adds a small lateral ramp (at most 0.1 m) to matching modes.
SynthPredictions gen_prediction_set(const AgentTrack& gt, FineDirection gt_fine,
                                    const HorizonConfig& horizon, int match_count, int modes,
                                    Perturbation perturbation = Perturbation::kNone);

/// Ground-truth future (t_pred steps) of a track as plain (x, y, valid) points.
XYTrajectory future_xy(const AgentTrack& track, const HorizonConfig& horizon);

/// Eight specs, one per behavior, in BehaviorLabel order.
std::vector<SynthSpec> canonical_behavior_specs();

/// Random spec covering all kinds and both sides. When `random_pose` is set
/// the trajectory is placed at a random map pose.
SynthSpec random_spec(std::mt19937_64& rng, bool random_pose);

struct SynthCase {
  Scenario scenario;
  SynthSpec spec;
  ExpectedLabels expected;
  LaneTopology topology = LaneTopology::kSingle;
  std::optional<std::set<DirectionLabel>> expected_lane_directions;
};

/// Scenario types used by the shipped guideline book, in book order.
const std::vector<std::string>& sample_scenario_types();

/// Suites: "default" (canonical behavior cases followed by random ones) and
/// "direction" (random only). Only robust cases are kept. Ids are
/// "<suite>-NNNNNN".
std::vector<SynthCase> gen_suite(std::string_view suite, std::size_t count, std::uint64_t seed,
                                 const HorizonConfig& horizon = {},
                                 const AttributeConfig& cfg = {},
                                 const BehaviorParams& behavior = {});

}  // namespace instructkit::synth
