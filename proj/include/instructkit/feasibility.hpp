#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "instructkit/labels.hpp"
#include "instructkit/motion_attributes.hpp"
#include "instructkit/scenario.hpp"

namespace instructkit {

struct FeasibilityParams {
  double max_speed_increase_kmh = 15.0;
  double horizon_s = 8.0;
  double max_range = 60.0;                 // m
  double stationary_speed_cap_kmh = 65.0;  // strict: feasible iff speed < cap
  double lane_assoc_radius = 3.5;          // m
  double lane_assoc_heading_tol_deg = 60.0;
  bool allow_neighbor_transitions = true;
  double sample_spacing = 2.0;  // m

  void validate() const;  // throws ConfigError
};

struct FeasibilityReport {
  DirectionLabel gt_direction = DirectionLabel::kStraight;
  std::set<DirectionLabel> feasible;    // excludes gt_direction
  std::set<DirectionLabel> infeasible;  // complement of feasible and gt
  int candidates_examined = 0;

  friend bool operator==(const FeasibilityReport&, const FeasibilityReport&) = default;
};

struct LaneAssociation {
  std::string lane_id;
  int index = 0;         // centerline point nearest to the projection
  double offset = 0.0;   // arc length from the lane start to the projection, m
  double distance = 0.0; // lateral distance from the focal pose, m
};

struct CandidateSample {
  std::string lane_id;
  double arc_length = 0.0;  // m travelled from the focal projection
  double lon = 0.0;
  double lat = 0.0;
  double rel_heading = 0.0;
};

/// Lanes passing within the association radius of the focal agent's current
/// pose with an aligned local heading. Sorted by lane_id.
std::vector<LaneAssociation> associate_lanes(const Scenario& scenario,
                                             const FeasibilityParams& params = {});

/// Distance reachable within the horizon under a constant-acceleration ramp
/// to at most `max_speed_increase` above the current speed, clamped by the
/// speed limit and capped at `max_range`.
double reachable_range(double current_speed_mps, std::optional<double> speed_limit_kmh,
                       const FeasibilityParams& params = {});

/// Ego-frame samples of every lane position reachable from the associated
/// lanes. Ordered by lane_id, then arc length.
std::vector<CandidateSample> enumerate_candidates(const Scenario& scenario,
                                                  const FeasibilityParams& params = {});

/// Coarse direction a candidate destination would represent.
DirectionLabel classify_candidate(const CandidateSample& sample, const AttributeConfig& cfg);

/// GT / feasible / infeasible partition for the focal vehicle.
/// Throws NotAVehicle, InsufficientPoints or InvalidAnchor on unusable input.
FeasibilityReport feasibility_set(const Scenario& scenario, const FeasibilityParams& params = {},
                                  const AttributeConfig& cfg = {});

FeasTag tag_instruction(const FeasibilityReport& report, DirectionLabel instructed) noexcept;

}  // namespace instructkit
