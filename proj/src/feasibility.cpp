#include "instructkit/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "instructkit/errors.hpp"
#include "instructkit/geometry.hpp"

namespace instructkit {

namespace {

/// Arc-length view of a lane centerline.
class Polyline {
 public:
  explicit Polyline(const Lane& lane) : lane_(lane) {
    cumulative_.reserve(lane.centerline.size());
    double acc = 0.0;
    cumulative_.push_back(0.0);
    for (std::size_t i = 1; i < lane.centerline.size(); ++i) {
      const auto& a = lane.centerline[i - 1];
      const auto& b = lane.centerline[i];
      acc += std::hypot(b.x - a.x, b.y - a.y);
      cumulative_.push_back(acc);
    }
  }

  double length() const noexcept { return cumulative_.back(); }

  /// Pose at arc length s (clamped), heading interpolated from the recorded
  /// centerline headings.
  Pose2 at(double s) const noexcept {
    s = std::clamp(s, 0.0, length());
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    std::size_t i = it == cumulative_.begin() ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
    i = std::min(i, lane_.centerline.size() - 2);
    const auto& a = lane_.centerline[i];
    const auto& b = lane_.centerline[i + 1];
    const double seg = cumulative_[i + 1] - cumulative_[i];
    const double t = seg > 0.0 ? (s - cumulative_[i]) / seg : 0.0;
    return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y),
            wrap_angle(a.heading + t * wrap_angle(b.heading - a.heading))};
  }

  struct Projection {
    double offset = 0.0;
    double distance = std::numeric_limits<double>::infinity();
    int nearest_index = 0;
    double heading = 0.0;
  };

  /// Closest point whose local heading is within `heading_tol` of `heading`
  /// (any heading when tol is infinite).
  Projection project(double x, double y, double heading, double heading_tol) const noexcept {
    Projection best;
    for (std::size_t i = 0; i + 1 < lane_.centerline.size(); ++i) {
      const auto& a = lane_.centerline[i];
      const auto& b = lane_.centerline[i + 1];
      const double vx = b.x - a.x;
      const double vy = b.y - a.y;
      const double len2 = vx * vx + vy * vy;
      const double t = std::clamp(((x - a.x) * vx + (y - a.y) * vy) / len2, 0.0, 1.0);
      const double px = a.x + t * vx;
      const double py = a.y + t * vy;
      const double d = std::hypot(x - px, y - py);
      const std::size_t nearest = t < 0.5 ? i : i + 1;
      const double local_heading = lane_.centerline[nearest].heading;
      if (std::abs(wrap_angle(local_heading - heading)) > heading_tol) continue;
      if (d < best.distance) {
        best.distance = d;
        best.offset = cumulative_[i] + t * (cumulative_[i + 1] - cumulative_[i]);
        best.nearest_index = static_cast<int>(nearest);
        best.heading = local_heading;
      }
    }
    return best;
  }

 private:
  const Lane& lane_;
  std::vector<double> cumulative_;
};

const TrajectoryPoint& current_pose(const Scenario& scenario) {
  const auto& focal = scenario.focal();
  const int step = scenario.horizon.current_step();
  if (step < 0 || step >= static_cast<int>(focal.points.size()) ||
      !focal.points[static_cast<std::size_t>(step)].valid) {
    throw InvalidAnchor("focal agent has no valid current pose");
  }
  return focal.points[static_cast<std::size_t>(step)];
}

}  // namespace

void FeasibilityParams::validate() const {
  auto pos = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!pos(max_speed_increase_kmh) || !pos(horizon_s) || !pos(max_range) ||
      !pos(stationary_speed_cap_kmh) || !pos(lane_assoc_radius) ||
      !pos(lane_assoc_heading_tol_deg) || !pos(sample_spacing)) {
    throw ConfigError("feasibility parameters must be strictly positive");
  }
}

std::vector<LaneAssociation> associate_lanes(const Scenario& scenario,
                                             const FeasibilityParams& params) {
  const auto& pose = current_pose(scenario);
  const double tol = deg_to_rad(params.lane_assoc_heading_tol_deg);
  std::vector<LaneAssociation> out;
  for (const auto& lane : scenario.lanes) {
    const Polyline line(lane);
    const auto proj = line.project(pose.x, pose.y, pose.heading, tol);
    if (proj.distance <= params.lane_assoc_radius) {
      out.push_back({lane.lane_id, proj.nearest_index, proj.offset, proj.distance});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.lane_id < b.lane_id; });
  return out;
}

double reachable_range(double current_speed_mps, std::optional<double> speed_limit_kmh,
                       const FeasibilityParams& params) {
  const double v = std::max(0.0, current_speed_mps);
  double v_max = v + params.max_speed_increase_kmh / kKmhPerMps;
  if (speed_limit_kmh) v_max = std::min(v_max, *speed_limit_kmh / kKmhPerMps);
  return std::min(params.max_range, params.horizon_s * (v + v_max) / 2.0);
}

std::vector<CandidateSample> enumerate_candidates(const Scenario& scenario,
                                                  const FeasibilityParams& params) {
  const auto associations = associate_lanes(scenario, params);
  if (associations.empty()) return {};
  const auto& pose = current_pose(scenario);
  const EgoFrame frame({pose.x, pose.y, pose.heading});

  std::map<std::string, Polyline, std::less<>> lines;
  for (const auto& lane : scenario.lanes) lines.emplace(lane.lane_id, Polyline(lane));

  struct State {
    const Lane* lane;
    double entry_offset;
    double travelled;
    bool neighbor_used;
  };

  std::vector<CandidateSample> samples;
  const double spacing = params.sample_spacing;

  for (const auto& assoc : associations) {
    const Lane* start = scenario.find_lane(assoc.lane_id);
    const double range = reachable_range(pose.speed, start->speed_limit_kmh, params);
    if (range <= 0.0) continue;

    // Identical states reached along different branches are expanded once.
    std::set<std::tuple<std::string, bool, long long, long long>> expanded;
    std::deque<State> queue{{start, assoc.offset, 0.0, false}};
    while (!queue.empty()) {
      const State s = queue.front();
      queue.pop_front();
      if (!expanded
               .emplace(s.lane->lane_id, s.neighbor_used, std::llround(s.entry_offset * 1e6),
                        std::llround(s.travelled * 1e6))
               .second) {
        continue;
      }

      const auto& line = lines.at(s.lane->lane_id);
      const double available = line.length() - s.entry_offset;
      for (double k = std::floor(s.travelled / spacing) + 1.0;; k += 1.0) {
        const double target = k * spacing;
        if (target > range || target - s.travelled > available) break;
        const auto p = line.at(s.entry_offset + (target - s.travelled));
        const auto e = frame.transform(p.x, p.y, p.heading);
        samples.push_back({s.lane->lane_id, target, e.lon, e.lat, e.rel_heading});
      }

      const double at_end = s.travelled + available;
      if (at_end < range) {
        for (const auto& succ : s.lane->successors) {
          queue.push_back({scenario.find_lane(succ), 0.0, at_end, s.neighbor_used});
        }
      }
      if (params.allow_neighbor_transitions && !s.neighbor_used) {
        const auto entry = line.at(s.entry_offset);
        for (const auto& nb : {s.lane->left_neighbor, s.lane->right_neighbor}) {
          if (!nb) continue;
          const auto& nb_line = lines.at(*nb);
          const auto proj = nb_line.project(entry.x, entry.y, entry.heading,
                                            std::numeric_limits<double>::infinity());
          if (s.travelled + proj.distance < range) {
            queue.push_back({scenario.find_lane(*nb), proj.offset, s.travelled + proj.distance,
                             true});
          }
        }
      }
    }
  }

  std::sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) {
    return std::tie(a.lane_id, a.arc_length, a.lon, a.lat, a.rel_heading) <
           std::tie(b.lane_id, b.arc_length, b.lon, b.lat, b.rel_heading);
  });
  return samples;
}

DirectionLabel classify_candidate(const CandidateSample& sample, const AttributeConfig& cfg) {
  return collapse_direction(classify_displacement(sample.rel_heading, sample.lat, cfg.direction),
                            cfg.collapse);
}

FeasibilityReport feasibility_set(const Scenario& scenario, const FeasibilityParams& params,
                                  const AttributeConfig& cfg) {
  const auto& focal = scenario.focal();
  if (focal.kind != AgentKind::kVehicle) {
    throw NotAVehicle("focal agent '" + focal.agent_id + "' is not a vehicle");
  }
  const auto& pose = current_pose(scenario);

  FeasibilityReport report;
  const auto fine = classify_direction_fine(focal, future_window(scenario.horizon), cfg.direction,
                                            cfg.epsilon_disp);
  report.gt_direction = collapse_direction(fine, cfg.collapse);

  const auto candidates = enumerate_candidates(scenario, params);
  report.candidates_examined = static_cast<int>(candidates.size());
  for (const auto& c : candidates) report.feasible.insert(classify_candidate(c, cfg));
  if (pose.speed * kKmhPerMps < params.stationary_speed_cap_kmh) {
    report.feasible.insert(DirectionLabel::kStationary);
  }
  report.feasible.erase(report.gt_direction);
  for (auto d : kAllDirections) {
    if (d != report.gt_direction && !report.feasible.contains(d)) report.infeasible.insert(d);
  }
  return report;
}

FeasTag tag_instruction(const FeasibilityReport& report, DirectionLabel instructed) noexcept {
  if (instructed == report.gt_direction) return FeasTag::kGT;
  if (report.feasible.contains(instructed)) return FeasTag::kF;
  return FeasTag::kIF;
}

}  // namespace instructkit
