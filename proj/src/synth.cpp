#include "instructkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "instructkit/errors.hpp"

namespace instructkit::synth {

namespace {

// Margins that keep a label stable under sampling and floating point noise.
constexpr double kLatMargin = 0.25;                // m
constexpr double kHeadingMarginDeg = 1.0;          // on top of the chord error bound
constexpr double kStationarySpeedMargin = 0.3;     // m/s
constexpr double kDistanceMargin = 0.3;            // m
constexpr double kKmhMargin = 0.1;                 // km/h, speed and acceleration bands
constexpr double kStopSpeedMargin = 0.05;          // m/s
constexpr double kChordMargin = 1e-6;              // m
constexpr double kUTurnSwingDeg = 90.0;
constexpr double kVeerAngleDeg = 25.0;

double step_time(int k, double dt) { return static_cast<double>(k) * dt; }

int grid_steps(double seconds, double dt) { return static_cast<int>(std::llround(seconds / dt)); }

Pose2 advance(const Pose2& start, double curvature, double u) {
  if (curvature == 0.0) {
    return {start.x + u * std::cos(start.heading), start.y + u * std::sin(start.heading),
            start.heading};
  }
  const double h = start.heading + curvature * u;
  return {start.x + (std::sin(h) - std::sin(start.heading)) / curvature,
          start.y - (std::cos(h) - std::cos(start.heading)) / curvature, h};
}

}  // namespace

std::string_view to_string(SynthKind kind) noexcept {
  switch (kind) {
    case SynthKind::kStraight: return "straight";
    case SynthKind::kArc: return "arc";
    case SynthKind::kStop: return "stop";
    case SynthKind::kDwellThenGo: return "dwell_then_go";
    case SynthKind::kPiecewise: return "piecewise";
    case SynthKind::kUTurn: return "u_turn";
  }
  return "straight";
}

Path::Path(std::vector<PathPiece> pieces) : pieces_(std::move(pieces)) {
  Pose2 pose;
  double offset = 0.0;
  for (const auto& p : pieces_) {
    starts_.push_back(pose);
    offsets_.push_back(offset);
    pose = advance(pose, p.curvature, p.length);
    offset += p.length;
    max_curvature_ = std::max(max_curvature_, std::abs(p.curvature));
  }
  starts_.push_back(pose);
  offsets_.push_back(offset);
}

Pose2 Path::at(double s) const noexcept {
  if (s <= 0.0 || pieces_.empty()) return {s, 0.0, 0.0};
  if (s >= offsets_.back()) return advance(starts_.back(), 0.0, s - offsets_.back());
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), s);
  const auto i = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  return advance(starts_[i], pieces_[i].curvature, s - offsets_[i]);
}

SpeedProfile::SpeedProfile(std::vector<SpeedKnot> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) knots_.push_back({0.0, 0.0});
  cumulative_.push_back(0.0);
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    const auto& a = knots_[i - 1];
    const auto& b = knots_[i];
    cumulative_.push_back(cumulative_.back() + 0.5 * (a.v + b.v) * (b.t - a.t));
  }
}

double SpeedProfile::speed(double t) const noexcept {
  if (t <= knots_.front().t) return knots_.front().v;
  if (t >= knots_.back().t) return knots_.back().v;
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                   [](double x, const SpeedKnot& k) { return x < k.t; });
  const auto& b = *it;
  const auto& a = *(it - 1);
  return a.v + (b.v - a.v) * (t - a.t) / (b.t - a.t);
}

double SpeedProfile::distance(double t) const noexcept {
  // Integral from the first knot, shifted so that distance(0) = 0.
  auto from_first = [this](double tt) {
    if (tt <= knots_.front().t) return knots_.front().v * (tt - knots_.front().t);
    if (tt >= knots_.back().t) return cumulative_.back() + knots_.back().v * (tt - knots_.back().t);
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), tt,
                                     [](double x, const SpeedKnot& k) { return x < k.t; });
    const auto i = static_cast<std::size_t>(it - knots_.begin()) - 1;
    return cumulative_[i] + 0.5 * (knots_[i].v + speed(tt)) * (tt - knots_[i].t);
  };
  return from_first(t) - from_first(0.0);
}

double SpeedProfile::max_speed(double t0, double t1) const noexcept {
  double m = std::max(speed(t0), speed(t1));
  for (const auto& k : knots_) {
    if (k.t > t0 && k.t < t1) m = std::max(m, k.v);
  }
  return m;
}

void validate_spec(const SynthSpec& spec, const HorizonConfig& horizon) {
  try {
    horizon.validate();
  } catch (const SchemaError& e) {
    throw InvalidSpec(e.what());
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(spec.x0) || !finite(spec.y0) || !finite(spec.heading0)) {
    throw InvalidSpec("pose must be finite");
  }
  for (double v : {spec.v0, spec.v_mid, spec.v1}) {
    if (!(v >= 0.0) || !finite(v)) throw InvalidSpec("speeds must be finite and non-negative");
  }
  if (spec.kind == SynthKind::kArc || spec.kind == SynthKind::kUTurn) {
    if (!(spec.radius > 0.0) || !finite(spec.radius)) throw InvalidSpec("radius must be positive");
    if (!(spec.angle_deg > 0.0 && spec.angle_deg <= 200.0)) {
      throw InvalidSpec("angle must lie in (0, 200] degrees");
    }
  }
  if (spec.kind == SynthKind::kUTurn && !(spec.lateral_offset > 0.0)) {
    throw InvalidSpec("u_turn needs a positive swing radius in lateral_offset");
  }
  if (!(spec.lateral_offset >= 0.0) || !finite(spec.lateral_offset)) {
    throw InvalidSpec("lateral_offset must be non-negative");
  }
  if (spec.kind == SynthKind::kStop || spec.kind == SynthKind::kDwellThenGo) {
    const int steps = grid_steps(spec.dwell_s, horizon.dt);
    if (!(spec.dwell_s >= 0.0) || std::abs(step_time(steps, horizon.dt) - spec.dwell_s) > 1e-9) {
      throw InvalidSpec("dwell_s must be a non-negative multiple of dt");
    }
    if (steps >= horizon.t_pred) throw InvalidSpec("dwell_s must be shorter than the horizon");
  }
}

Path build_path(const SynthSpec& spec, const HorizonConfig&) {
  const double sign = spec.side == TurnSide::kLeft ? 1.0 : -1.0;
  switch (spec.kind) {
    case SynthKind::kArc: {
      const double a = deg_to_rad(spec.angle_deg);
      return Path({{spec.radius * a, sign / spec.radius}});
    }
    case SynthKind::kUTurn: {
      const double swing = deg_to_rad(kUTurnSwingDeg);
      const double loop = deg_to_rad(spec.angle_deg + kUTurnSwingDeg);
      return Path({{spec.lateral_offset * swing, -sign / spec.lateral_offset},
                   {spec.radius * loop, sign / spec.radius}});
    }
    case SynthKind::kStraight:
    case SynthKind::kPiecewise:
      if (spec.lateral_offset > 0.0) {
        // S-curve: turn by alpha, then back; lateral shift 2R(1 - cos alpha).
        const double a = deg_to_rad(kVeerAngleDeg);
        const double r = spec.lateral_offset / (2.0 * (1.0 - std::cos(a)));
        return Path({{r * a, sign / r}, {r * a, -sign / r}});
      }
      return Path();
    case SynthKind::kStop:
    case SynthKind::kDwellThenGo:
      return Path();
  }
  return Path();
}

SpeedProfile build_profile(const SynthSpec& spec, const HorizonConfig& horizon) {
  const double dt = horizon.dt;
  const int n = horizon.t_pred;
  const double end = step_time(n, dt);
  switch (spec.kind) {
    case SynthKind::kStraight:
    case SynthKind::kArc:
    case SynthKind::kUTurn:
      return SpeedProfile({{0.0, spec.v0}, {end, spec.v1}});
    case SynthKind::kPiecewise:
      return SpeedProfile({{0.0, spec.v0}, {step_time(n / 2, dt), spec.v_mid}, {end, spec.v1}});
    case SynthKind::kStop: {
      const int rest = grid_steps(spec.dwell_s, dt);
      return SpeedProfile({{0.0, spec.v0}, {step_time(n - rest, dt), 0.0}, {end, 0.0}});
    }
    case SynthKind::kDwellThenGo: {
      const int rest = grid_steps(spec.dwell_s, dt);
      return SpeedProfile({{0.0, 0.0}, {step_time(rest, dt), 0.0}, {end, spec.v1}});
    }
  }
  return SpeedProfile();
}

namespace {

struct WindowLabels {
  FineDirection fine = FineDirection::kStationary;
  StepAttributes step;
  bool robust = true;
};

bool clear_of(double value, double threshold, double margin) {
  return std::abs(value - threshold) > margin;
}

// Classification rules applied to closed-form quantities of steps [k0, k1].
WindowLabels analyze_window(const Path& path, const SpeedProfile& profile, int k0, int k1,
                            double dt, const AttributeConfig& cfg) {
  WindowLabels out;
  const auto& th = cfg.direction;
  const double ta = step_time(k0, dt);
  const double tb = step_time(k1, dt);
  const double sa = profile.distance(ta);
  const double sb = profile.distance(tb);
  const double va = profile.speed(ta);
  const double vb = profile.speed(tb);

  const double vmax = profile.max_speed(ta, tb);
  const double travelled = sb - sa;
  const bool slow = vmax < th.v_stationary;
  const bool short_path = travelled < th.d_stationary;
  const bool slow_clear = clear_of(vmax, th.v_stationary, kStationarySpeedMargin);
  const bool short_clear = clear_of(travelled, th.d_stationary, kDistanceMargin);
  if (!((slow_clear && short_clear) || (slow_clear && !slow) || (short_clear && !short_path))) {
    out.robust = false;
  }

  if (slow && short_path) {
    out.fine = FineDirection::kStationary;
  } else {
    const Pose2 pa = path.at(sa);
    const Pose2 pa1 = path.at(profile.distance(step_time(k0 + 1, dt)));
    const double first_chord = std::hypot(pa1.x - pa.x, pa1.y - pa.y);
    double h_start = pa.heading;
    if (first_chord > cfg.epsilon_disp + kChordMargin) {
      h_start = pa.heading + wrap_angle(std::atan2(pa1.y - pa.y, pa1.x - pa.x) - pa.heading);
    } else if (first_chord >= cfg.epsilon_disp - kChordMargin) {
      out.robust = false;
    }

    const Pose2 pb = path.at(sb);
    const double last_chord = sb - profile.distance(step_time(k1 - 1, dt));
    double heading_error = 0.0;
    if (path.max_abs_curvature() > 0.0) {
      if (last_chord > cfg.epsilon_disp + kChordMargin) {
        heading_error = path.max_abs_curvature() * last_chord;
      } else {
        out.robust = false;
      }
    }

    const double delta = wrap_angle(pb.heading - h_start);
    const double dx = pb.x - pa.x;
    const double dy = pb.y - pa.y;
    const double lat = -std::sin(h_start) * dx + std::cos(h_start) * dy;

    const double theta_s = deg_to_rad(th.theta_s_deg);
    const double h_margin = deg_to_rad(kHeadingMarginDeg) + heading_error;
    if (!clear_of(std::abs(delta), theta_s, h_margin) || std::abs(delta) > kPi - h_margin) {
      out.robust = false;
    }
    if (std::abs(delta) <= theta_s) {
      if (!clear_of(std::abs(lat), th.d_v, kLatMargin)) out.robust = false;
      out.fine = lat > th.d_v    ? FineDirection::kStraightVeerLeft
                 : lat < -th.d_v ? FineDirection::kStraightVeerRight
                                 : FineDirection::kStraight;
    } else if (delta > 0.0) {
      if (!clear_of(lat, -th.d_u, kLatMargin)) out.robust = false;
      out.fine = lat < -th.d_u ? FineDirection::kLeftUTurn : FineDirection::kLeftTurn;
    } else {
      if (!clear_of(lat, th.d_u, kLatMargin)) out.robust = false;
      out.fine = lat > th.d_u ? FineDirection::kRightUTurn : FineDirection::kRightTurn;
    }
  }
  out.step.direction = cfg.collapse.to_coarse[index_of(out.fine)];

  // Trapezoid sums are exact for a piecewise-linear speed with knots on the grid.
  const double speed_sum = travelled / dt + 0.5 * (va + vb);
  const double mean_kmh = speed_sum / static_cast<double>(k1 - k0 + 1) * kKmhPerMps;
  std::size_t band = cfg.speed.upper_kmh.size();
  for (std::size_t i = 0; i < cfg.speed.upper_kmh.size(); ++i) {
    if (!clear_of(mean_kmh, cfg.speed.upper_kmh[i], kKmhMargin)) out.robust = false;
    if (band == cfg.speed.upper_kmh.size() && mean_kmh < cfg.speed.upper_kmh[i]) band = i;
  }
  out.step.speed = static_cast<SpeedCategory>(band);

  const double dv = (vb - va) * kKmhPerMps * (kAccelReferenceSeconds / (tb - ta));
  const auto& bounds = cfg.accel.bounds_kmh;
  for (double b : bounds) {
    if (!clear_of(std::abs(dv), b, kKmhMargin)) out.robust = false;
  }
  if (std::abs(dv) < bounds[0]) {
    out.step.accel = AccelCategory::kConstant;
  } else {
    std::size_t level = 3;
    for (std::size_t i = 1; i < bounds.size(); ++i) {
      if (std::abs(dv) < bounds[i]) {
        level = i - 1;
        break;
      }
    }
    const std::size_t base = dv > 0.0 ? 1 : 5;  // mild accel / mild decel
    out.step.accel = static_cast<AccelCategory>(base + level);
  }
  return out;
}

struct BehaviorLabelResult {
  BehaviorLabel label = BehaviorLabel::kMaintainingSpeed;
  bool robust = true;
};

BehaviorLabelResult analyze_behavior(const SpeedProfile& profile, int n, double dt,
                                     const BehaviorParams& params) {
  BehaviorLabelResult out;
  const double total = step_time(n, dt);
  const double v_stop = params.v_stop;
  auto below = [&](double v) {
    if (!clear_of(v, v_stop, kStopSpeedMargin)) out.robust = false;
    return v < v_stop;
  };

  if (below(profile.max_speed(0.0, total))) {
    out.label = BehaviorLabel::kNotMoving;
    return out;
  }
  const int dwell = static_cast<int>(std::floor(params.dwell_s / dt + 1e-9));
  const bool head_rest = below(profile.max_speed(0.0, step_time(dwell, dt)));
  if (head_rest) {
    out.label = BehaviorLabel::kWaitingThenMoving;
    return out;
  }
  const bool start_moving = !below(profile.speed(0.0));
  const bool tail_rest = below(profile.max_speed(step_time(n - dwell, dt), total));
  if (start_moving && tail_rest) {
    out.label = BehaviorLabel::kStopping;
    return out;
  }

  const int h1 = n / 2;
  const int h2 = (n + 1) / 2;
  auto rate = [&](int a, int b) {
    return (profile.speed(step_time(b, dt)) - profile.speed(step_time(a, dt))) * kKmhPerMps *
           (kAccelReferenceSeconds / step_time(b - a, dt));
  };
  const double c = params.delta_v_const_kmh;
  const double first = rate(0, h1);
  const double second = rate(h2, n);
  for (double v : {first, second}) {
    if (!clear_of(v, c, kKmhMargin) || !clear_of(v, -c, kKmhMargin)) out.robust = false;
  }
  if (first < -c && second > c) {
    out.label = BehaviorLabel::kSlowingThenSpeeding;
    return out;
  }
  if (first > c && second < -c) {
    out.label = BehaviorLabel::kSpeedingThenSlowing;
    return out;
  }
  const double whole = rate(0, n);
  if (!clear_of(whole, c, kKmhMargin) || !clear_of(whole, -c, kKmhMargin)) out.robust = false;
  if (whole >= c) {
    out.label = BehaviorLabel::kSpeedingUp;
  } else if (whole <= -c) {
    out.label = BehaviorLabel::kSlowingDown;
  } else {
    out.label = BehaviorLabel::kMaintainingSpeed;
  }
  return out;
}

}  // namespace

SynthTrajectory gen_trajectory(const SynthSpec& spec, const HorizonConfig& horizon,
                               const AttributeConfig& cfg, const BehaviorParams& behavior) {
  validate_spec(spec, horizon);
  const Path path = build_path(spec, horizon);
  const SpeedProfile profile = build_profile(spec, horizon);
  const double dt = horizon.dt;
  const int current = horizon.current_step();

  SynthTrajectory out;
  out.track.agent_id = "ego";
  out.track.kind = AgentKind::kVehicle;
  const double c = std::cos(spec.heading0);
  const double s = std::sin(spec.heading0);
  for (int i = 0; i < horizon.total_steps(); ++i) {
    const double t = step_time(i - current, dt);
    const Pose2 p = path.at(profile.distance(t));
    TrajectoryPoint tp;
    tp.x = spec.x0 + c * p.x - s * p.y;
    tp.y = spec.y0 + s * p.x + c * p.y;
    tp.heading = wrap_angle(spec.heading0 + p.heading);
    tp.speed = profile.speed(t);
    tp.valid = true;
    tp.t_index = i;
    out.track.points.push_back(tp);
  }

  const int n = horizon.t_pred;
  const auto full = analyze_window(path, profile, 0, n, dt, cfg);
  const auto beh = analyze_behavior(profile, n, dt, behavior);
  auto& e = out.expected;
  e.fine = full.fine;
  e.direction = full.step.direction;
  e.speed = full.step.speed;
  e.accel = full.step.accel;
  e.behavior = beh.label;
  e.robust = full.robust && beh.robust;

  const int mid = n / 2;
  const auto first = analyze_window(path, profile, 0, mid, dt, cfg);
  const auto second = analyze_window(path, profile, mid, n, dt, cfg);
  if (e.robust && first.robust && second.robust) e.two_step = TwoStep{first.step, second.step};
  return out;
}

std::string_view to_string(LaneTopology topology) noexcept {
  switch (topology) {
    case LaneTopology::kSingle: return "single";
    case LaneTopology::kTJunction: return "t_junction";
    case LaneTopology::kParallelPair: return "parallel_pair";
    case LaneTopology::kULoop: return "u_loop";
  }
  return "single";
}

std::optional<LaneTopology> topology_from_string(std::string_view name) noexcept {
  for (auto t : kAllTopologies) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

namespace {

Lane make_lane(std::string id, const Pose2& start, const Path& path, double length,
               double spacing) {
  Lane lane;
  lane.lane_id = std::move(id);
  const int n = static_cast<int>(std::ceil(length / spacing - 1e-9));
  const double c = std::cos(start.heading);
  const double s = std::sin(start.heading);
  for (int i = 0; i <= n; ++i) {
    const Pose2 p = path.at(length * i / n);
    lane.centerline.push_back({start.x + c * p.x - s * p.y, start.y + s * p.x + c * p.y,
                               wrap_angle(start.heading + p.heading)});
  }
  return lane;
}

constexpr double kStraightSpacing = 2.0;
constexpr double kCurveSpacing = 1.0;

}  // namespace

std::vector<Lane> gen_lane_graph(LaneTopology topology) {
  const double quarter = kPi / 2.0;
  std::vector<Lane> lanes;
  switch (topology) {
    case LaneTopology::kSingle:
      lanes.push_back(make_lane("lane_0", {-20.0, 0.0, 0.0}, Path(), 100.0, kStraightSpacing));
      break;
    case LaneTopology::kTJunction: {
      auto approach = make_lane("approach", {-20.0, 0.0, 0.0}, Path(), 40.0, kStraightSpacing);
      approach.successors = {"branch_left", "branch_right"};
      lanes.push_back(std::move(approach));
      lanes.push_back(make_lane("branch_left", {20.0, 0.0, 0.0}, Path({{10.0 * quarter, 0.1}}),
                                10.0 * quarter + 50.0, kCurveSpacing));
      lanes.push_back(make_lane("branch_right", {20.0, 0.0, 0.0}, Path({{10.0 * quarter, -0.1}}),
                                10.0 * quarter + 50.0, kCurveSpacing));
      break;
    }
    case LaneTopology::kParallelPair: {
      auto right = make_lane("lane_right", {-20.0, 0.0, 0.0}, Path(), 100.0, kStraightSpacing);
      auto left = make_lane("lane_left", {-20.0, 3.5, 0.0}, Path(), 100.0, kStraightSpacing);
      right.left_neighbor = "lane_left";
      left.right_neighbor = "lane_right";
      lanes.push_back(std::move(left));
      lanes.push_back(std::move(right));
      break;
    }
    case LaneTopology::kULoop: {
      auto approach = make_lane("approach", {-10.0, 0.0, 0.0}, Path(), 20.0, kStraightSpacing);
      approach.successors = {"straight", "u_ramp"};
      lanes.push_back(std::move(approach));
      lanes.push_back(make_lane("straight", {10.0, 0.0, 0.0}, Path(), 80.0, kStraightSpacing));
      const Path loop({{12.0 * quarter, -1.0 / 12.0}, {5.0 * 3.0 * quarter, 1.0 / 5.0}});
      lanes.push_back(make_lane("u_ramp", {10.0, 0.0, 0.0}, loop,
                                12.0 * quarter + 5.0 * 3.0 * quarter + 40.0, kCurveSpacing));
      break;
    }
  }
  return lanes;
}

std::set<DirectionLabel> expected_lane_directions(LaneTopology topology) {
  switch (topology) {
    case LaneTopology::kSingle:
    case LaneTopology::kParallelPair:
      return {DirectionLabel::kStraight};
    case LaneTopology::kTJunction:
      return {DirectionLabel::kStraight, DirectionLabel::kLeft, DirectionLabel::kRight};
    case LaneTopology::kULoop:
      return {DirectionLabel::kStraight, DirectionLabel::kRight, DirectionLabel::kLeftUTurn};
  }
  return {};
}

Scenario gen_scenario(std::string scenario_id, const SynthTrajectory& trajectory,
                      LaneTopology topology, const HorizonConfig& horizon,
                      std::optional<std::string> scenario_type) {
  Scenario s;
  s.scenario_id = std::move(scenario_id);
  s.focal_agent_id = trajectory.track.agent_id;
  s.scenario_type = std::move(scenario_type);
  s.horizon = horizon;
  s.agents.push_back(trajectory.track);

  AgentTrack ped;
  ped.agent_id = "ped";
  ped.kind = AgentKind::kPedestrian;
  const auto& anchor = trajectory.track.points.at(static_cast<std::size_t>(horizon.current_step()));
  for (int i = 0; i < horizon.total_steps(); ++i) {
    TrajectoryPoint p;
    p.x = anchor.x + 5.0;
    p.y = anchor.y + 8.0;
    p.t_index = i;
    ped.points.push_back(p);
  }
  s.agents.push_back(std::move(ped));
  s.lanes = gen_lane_graph(topology);
  validate_scenario(s);
  return s;
}

XYTrajectory future_xy(const AgentTrack& track, const HorizonConfig& horizon) {
  XYTrajectory out;
  out.reserve(static_cast<std::size_t>(horizon.t_pred));
  for (int i = horizon.current_step() + 1; i <= horizon.last_step(); ++i) {
    const auto& p = track.points.at(static_cast<std::size_t>(i));
    out.push_back({p.x, p.y, p.valid});
  }
  return out;
}

SynthPredictions gen_prediction_set(const AgentTrack& gt, FineDirection gt_fine,
                                    const HorizonConfig& horizon, int match_count, int modes,
                                    Perturbation perturbation) {
  if (modes < 1 || match_count < 0 || match_count > modes) {
    throw InvalidSpec("need 0 <= match_count <= modes and modes >= 1");
  }
  const CollapseMap collapse;
  const auto& origin = gt.points.at(static_cast<std::size_t>(horizon.current_step()));
  const EgoFrame frame({origin.x, origin.y, origin.heading});
  const auto future = future_xy(gt, horizon);
  const auto gt_dir = collapse_direction(gt_fine, collapse);
  const auto mirrored_dir = collapse_direction(mirror(gt_fine), collapse);

  XYTrajectory matching = future;
  if (perturbation == Perturbation::kJitter) {
    const double n = static_cast<double>(matching.size());
    for (std::size_t k = 0; k < matching.size(); ++k) {
      const double off = 0.1 * static_cast<double>(k + 1) / n;
      matching[k].x += -std::sin(origin.heading) * off;
      matching[k].y += std::cos(origin.heading) * off;
    }
  }

  XYTrajectory other;
  DirectionLabel other_dir;
  if (mirrored_dir != gt_dir) {
    for (const auto& p : future) {
      const auto e = frame.transform(p.x, p.y);
      const auto m = frame.to_map(e.lon, -e.lat, 0.0);
      other.push_back({m.x, m.y, p.valid});
    }
    other_dir = mirrored_dir;
  } else {
    const bool turn = gt_dir == DirectionLabel::kStraight;
    const Path path = turn ? Path({{15.0 * kPi / 2.0, 1.0 / 15.0}}) : Path();
    for (int k = 1; k <= horizon.t_pred; ++k) {
      const auto p = path.at(8.0 * step_time(k, horizon.dt));
      const auto m = frame.to_map(p.x, p.y, 0.0);
      other.push_back({m.x, m.y, true});
    }
    other_dir = turn ? DirectionLabel::kLeft : DirectionLabel::kStraight;
  }

  SynthPredictions out;
  out.set.scenario_id = "";
  out.set.origin = origin;
  for (int j = 0; j < modes; ++j) {
    const bool match = j < match_count;
    out.set.trajectories.push_back(match ? matching : other);
    out.set.scores.push_back(0.0);
    out.expected.push_back(match ? gt_dir : other_dir);
  }
  return out;
}

std::vector<SynthSpec> canonical_behavior_specs() {
  auto piecewise = [](double a, double b, double c) {
    SynthSpec s;
    s.kind = SynthKind::kPiecewise;
    s.v0 = a;
    s.v_mid = b;
    s.v1 = c;
    return s;
  };
  SynthSpec not_moving;
  not_moving.kind = SynthKind::kStop;
  not_moving.v0 = 0.0;
  SynthSpec stopping;
  stopping.kind = SynthKind::kStop;
  stopping.v0 = 10.0;
  stopping.dwell_s = 1.0;
  SynthSpec waiting;
  waiting.kind = SynthKind::kDwellThenGo;
  waiting.dwell_s = 2.0;
  waiting.v1 = 8.0;
  return {not_moving,
          stopping,
          waiting,
          piecewise(15.0, 12.0, 9.0),
          piecewise(8.0, 11.0, 14.0),
          piecewise(12.0, 8.0, 12.0),
          piecewise(8.0, 12.0, 8.0),
          piecewise(8.0, 8.0, 8.0)};
}

namespace {

// Explicit conversions keep generation identical across standard libraries.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

TurnSide random_side(std::mt19937_64& rng) {
  return (rng() >> 63) != 0 ? TurnSide::kLeft : TurnSide::kRight;
}

}  // namespace

SynthSpec random_spec(std::mt19937_64& rng, bool random_pose) {
  SynthSpec s;
  const auto pick = rng() % 100;
  if (pick < 15) {
    s.kind = SynthKind::kStraight;
    s.v0 = uniform(rng, 0.2, 36.0);
    s.v1 = uniform(rng, 0.2, 36.0);
  } else if (pick < 30) {
    s.kind = SynthKind::kStraight;
    s.side = random_side(rng);
    s.lateral_offset = uniform(rng, 1.0, 10.0);
    s.v0 = uniform(rng, 4.0, 17.0);
    s.v1 = uniform(rng, 4.0, 17.0);
  } else if (pick < 60) {
    s.kind = SynthKind::kArc;
    s.side = random_side(rng);
    s.radius = uniform(rng, 8.0, 60.0);
    s.angle_deg = uniform(rng, 10.0, 200.0);
    s.v0 = uniform(rng, 1.0, 17.0);
    s.v1 = uniform(rng, 1.0, 17.0);
  } else if (pick < 70) {
    s.kind = SynthKind::kUTurn;
    s.side = random_side(rng);
    s.radius = uniform(rng, 4.0, 8.0);
    s.lateral_offset = uniform(rng, 6.0, 20.0);
    s.angle_deg = uniform(rng, 150.0, 200.0);
    s.v0 = uniform(rng, 4.0, 12.0);
    s.v1 = uniform(rng, 4.0, 12.0);
  } else if (pick < 80) {
    s.kind = SynthKind::kPiecewise;
    s.v0 = uniform(rng, 0.0, 36.0);
    s.v_mid = uniform(rng, 0.0, 36.0);
    s.v1 = uniform(rng, 0.0, 36.0);
  } else if (pick < 90) {
    s.kind = SynthKind::kStop;
    s.v0 = rng() % 5 == 0 ? 0.0 : uniform(rng, 0.5, 20.0);
    s.dwell_s = static_cast<double>(rng() % 31) / 10.0;
  } else {
    s.kind = SynthKind::kDwellThenGo;
    s.dwell_s = static_cast<double>(5 + rng() % 36) / 10.0;
    s.v1 = uniform(rng, 1.0, 15.0);
  }
  if (random_pose) {
    s.x0 = uniform(rng, -1000.0, 1000.0);
    s.y0 = uniform(rng, -1000.0, 1000.0);
    s.heading0 = uniform(rng, -kPi, kPi);
  }
  return s;
}

const std::vector<std::string>& sample_scenario_types() {
  static const std::vector<std::string> types{
      "accelerating_at_crosswalk",
      "behind_bike",
      "behind_long_vehicle",
      "following_lane_with_lead",
      "following_lane_with_slow_lead",
      "following_lane_without_lead",
      "starting_protected_cross_turn",
      "starting_protected_noncross_turn",
      "starting_unprotected_cross_turn",
      "starting_unprotected_noncross_turn",
      "stopping_with_lead",
      "traversing_crosswalk",
      "traversing_intersection",
      "waiting_for_pedestrian_to_cross"};
  return types;
}

std::vector<SynthCase> gen_suite(std::string_view suite, std::size_t count, std::uint64_t seed,
                                 const HorizonConfig& horizon, const AttributeConfig& cfg,
                                 const BehaviorParams& behavior) {
  if (suite != "default" && suite != "direction") {
    throw InvalidSpec("unknown suite '" + std::string(suite) + "'");
  }
  std::mt19937_64 rng(seed);
  std::vector<SynthSpec> queue;
  if (suite == "default") queue = canonical_behavior_specs();
  std::size_t queued = 0;

  std::vector<SynthCase> out;
  out.reserve(count);
  while (out.size() < count) {
    SynthSpec spec = queued < queue.size() ? queue[queued++] : random_spec(rng, false);
    const auto traj = gen_trajectory(spec, horizon, cfg, behavior);
    if (!traj.expected.robust || !traj.expected.two_step) continue;

    const std::size_t i = out.size();
    char id[32];
    std::snprintf(id, sizeof id, "-%06zu", i);
    SynthCase c;
    c.spec = spec;
    c.expected = traj.expected;
    c.topology = kAllTopologies[i % kAllTopologies.size()];
    const auto& types = sample_scenario_types();
    c.scenario = gen_scenario(std::string(suite) + id, traj, c.topology, horizon,
                              types[i % types.size()]);
    const double v0 = traj.track.points[static_cast<std::size_t>(horizon.current_step())].speed;
    // Trapezoidal ramp to v0 + 15 km/h over 8 s, no speed limit.
    const double range = std::min(60.0, 8.0 * (2.0 * v0 + 15.0 / kKmhPerMps) / 2.0);
    if (range >= kExpectedFeasibleMinRange) {
      c.expected_lane_directions = expected_lane_directions(c.topology);
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace instructkit::synth
