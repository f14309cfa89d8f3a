#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "instructkit/behavior_safety.hpp"
#include "instructkit/feasibility.hpp"
#include "instructkit/instruction_gen.hpp"
#include "instructkit/metrics.hpp"
#include "instructkit/motion_attributes.hpp"
#include "instructkit/scenario.hpp"

namespace instructkit {

/// Every tunable of the toolkit. JSON keys:
///   horizon.{t_obs,t_pred,t_select,dt}       (synthesis only; scenarios carry their own)
///   epsilon_disp
///   direction.{v_stationary,d_stationary,theta_s,d_v,d_u}
///   direction_collapse.{<fine direction>: <direction>}
///   speed_thresholds_kmh: [4 numbers], accel_thresholds_kmh: [4 numbers]
///   feasibility.{max_speed_increase_kmh,horizon_s,max_range,stationary_speed_cap_kmh,
///                lane_assoc_radius,lane_assoc_heading_tol,allow_neighbor_transitions,
///                sample_spacing}
///   behavior.{v_stop,dwell_s,delta_v_const_kmh}
///   sampler.{gt_fraction,if_fraction,class_balanced,seed}
///   loss.{sign: "sum"|"pseudocode_literal", score_kind: "logits"|"probabilities"}
///   jobs
struct Config {
  HorizonConfig horizon;
  AttributeConfig attributes;
  FeasibilityParams feasibility;
  BehaviorParams behavior;
  SamplerConfig sampler;
  LossSign loss_sign = LossSign::kSum;
  ScoreKind score_kind = ScoreKind::kLogits;
  unsigned jobs = 1;

  /// Throws ConfigError.
  void validate() const;
};

/// Overlays `j` onto the defaults. Unknown keys and bad values raise ConfigError.
Config config_from_json(const nlohmann::json& j);
Config parse_config(std::string_view json_text);

/// Resolved configuration as echoed into reports. `jobs` is omitted so that
/// outputs do not depend on the parallelism degree.
nlohmann::ordered_json config_to_json(const Config& config);

}  // namespace instructkit
