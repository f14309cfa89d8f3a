#include "instructkit/config.hpp"

#include <cmath>

#include "instructkit/errors.hpp"
#include "json_reader.hpp"

namespace instructkit {

using nlohmann::json;
using nlohmann::ordered_json;
using Reader = detail::ObjectReader<ConfigError>;

namespace {

void overlay(Reader& r, std::string_view key, double& out) {
  if (const auto* v = r.optional(key)) out = Reader::as_number(*v, r.child(key));
}
void overlay(Reader& r, std::string_view key, int& out) {
  if (const auto* v = r.optional(key)) out = Reader::as_int(*v, r.child(key));
}
void overlay(Reader& r, std::string_view key, bool& out) {
  if (const auto* v = r.optional(key)) out = Reader::as_bool(*v, r.child(key));
}

void overlay_bounds(Reader& r, std::string_view key, std::array<double, 4>& out) {
  const auto* v = r.optional(key);
  if (!v) return;
  const auto& arr = Reader::as_array(*v, r.child(key));
  if (arr.size() != out.size()) throw ConfigError(r.child(key) + ": expected 4 numbers");
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = Reader::as_number(arr[i], r.child(key));
}

}  // namespace

void Config::validate() const {
  try {
    horizon.validate();
  } catch (const SchemaError& e) {
    throw ConfigError(e.what());
  }
  attributes.direction.validate();
  attributes.speed.validate();
  attributes.accel.validate();
  if (!(attributes.epsilon_disp > 0.0) || !std::isfinite(attributes.epsilon_disp)) {
    throw ConfigError("epsilon_disp must be positive");
  }
  feasibility.validate();
  behavior.validate();
  sampler.validate();
  if (jobs == 0) throw ConfigError("jobs must be at least 1");
}

Config config_from_json(const json& j) {
  Config c;
  Reader r(j, "config");

  if (const auto* h = r.optional("horizon")) {
    Reader hr(*h, r.child("horizon"));
    overlay(hr, "t_obs", c.horizon.t_obs);
    overlay(hr, "t_pred", c.horizon.t_pred);
    overlay(hr, "dt", c.horizon.dt);
    if (const auto* v = hr.optional("t_select")) {
      const auto& arr = Reader::as_array(*v, hr.child("t_select"));
      c.horizon.t_select.clear();
      for (const auto& e : arr) c.horizon.t_select.push_back(Reader::as_int(e, hr.child("t_select")));
    }
    hr.finish();
  }

  overlay(r, "epsilon_disp", c.attributes.epsilon_disp);

  if (const auto* d = r.optional("direction")) {
    Reader dr(*d, r.child("direction"));
    auto& th = c.attributes.direction;
    overlay(dr, "v_stationary", th.v_stationary);
    overlay(dr, "d_stationary", th.d_stationary);
    overlay(dr, "theta_s", th.theta_s_deg);
    overlay(dr, "d_v", th.d_v);
    overlay(dr, "d_u", th.d_u);
    dr.finish();
  }

  if (const auto* m = r.optional("direction_collapse")) {
    if (!m->is_object()) throw ConfigError("config.direction_collapse: expected an object");
    for (auto it = m->begin(); it != m->end(); ++it) {
      const auto fine = fine_direction_from_string(it.key());
      if (!fine) throw ConfigError("config.direction_collapse: unknown direction '" + it.key() + "'");
      const auto where = "config.direction_collapse." + it.key();
      const auto coarse = direction_from_string(Reader::as_string(it.value(), where));
      if (!coarse) throw ConfigError(where + ": unknown direction");
      c.attributes.collapse.to_coarse[index_of(*fine)] = *coarse;
    }
  }

  overlay_bounds(r, "speed_thresholds_kmh", c.attributes.speed.upper_kmh);
  overlay_bounds(r, "accel_thresholds_kmh", c.attributes.accel.bounds_kmh);

  if (const auto* f = r.optional("feasibility")) {
    Reader fr(*f, r.child("feasibility"));
    auto& p = c.feasibility;
    overlay(fr, "max_speed_increase_kmh", p.max_speed_increase_kmh);
    overlay(fr, "horizon_s", p.horizon_s);
    overlay(fr, "max_range", p.max_range);
    overlay(fr, "stationary_speed_cap_kmh", p.stationary_speed_cap_kmh);
    overlay(fr, "lane_assoc_radius", p.lane_assoc_radius);
    overlay(fr, "lane_assoc_heading_tol", p.lane_assoc_heading_tol_deg);
    overlay(fr, "allow_neighbor_transitions", p.allow_neighbor_transitions);
    overlay(fr, "sample_spacing", p.sample_spacing);
    fr.finish();
  }

  if (const auto* b = r.optional("behavior")) {
    Reader br(*b, r.child("behavior"));
    overlay(br, "v_stop", c.behavior.v_stop);
    overlay(br, "dwell_s", c.behavior.dwell_s);
    overlay(br, "delta_v_const_kmh", c.behavior.delta_v_const_kmh);
    br.finish();
  }

  if (const auto* s = r.optional("sampler")) {
    Reader sr(*s, r.child("sampler"));
    overlay(sr, "gt_fraction", c.sampler.gt_fraction);
    overlay(sr, "if_fraction", c.sampler.if_fraction);
    overlay(sr, "class_balanced", c.sampler.class_balanced);
    if (const auto* v = sr.optional("seed")) {
      if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
        throw ConfigError("config.sampler.seed: expected a non-negative integer");
      }
      c.sampler.seed = v->get<std::uint64_t>();
    }
    sr.finish();
  }

  if (const auto* l = r.optional("loss")) {
    Reader lr(*l, r.child("loss"));
    if (const auto* v = lr.optional("sign")) {
      const auto s = Reader::as_string(*v, lr.child("sign"));
      if (s == "sum") c.loss_sign = LossSign::kSum;
      else if (s == "pseudocode_literal") c.loss_sign = LossSign::kPseudocodeLiteral;
      else throw ConfigError("config.loss.sign: expected 'sum' or 'pseudocode_literal'");
    }
    if (const auto* v = lr.optional("score_kind")) {
      const auto s = Reader::as_string(*v, lr.child("score_kind"));
      if (s == "logits") c.score_kind = ScoreKind::kLogits;
      else if (s == "probabilities") c.score_kind = ScoreKind::kProbabilities;
      else throw ConfigError("config.loss.score_kind: expected 'logits' or 'probabilities'");
    }
    lr.finish();
  }

  if (const auto* v = r.optional("jobs")) {
    const int jobs = Reader::as_int(*v, r.child("jobs"));
    if (jobs < 1) throw ConfigError("config.jobs must be at least 1");
    c.jobs = static_cast<unsigned>(jobs);
  }

  r.finish();
  c.validate();
  return c;
}

Config parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

ordered_json config_to_json(const Config& c) {
  ordered_json j;
  ordered_json h;
  h["t_obs"] = c.horizon.t_obs;
  h["t_pred"] = c.horizon.t_pred;
  h["t_select"] = c.horizon.t_select;
  h["dt"] = c.horizon.dt;
  j["horizon"] = h;
  j["epsilon_disp"] = c.attributes.epsilon_disp;

  const auto& th = c.attributes.direction;
  ordered_json d;
  d["v_stationary"] = th.v_stationary;
  d["d_stationary"] = th.d_stationary;
  d["theta_s"] = th.theta_s_deg;
  d["d_v"] = th.d_v;
  d["d_u"] = th.d_u;
  j["direction"] = d;

  ordered_json collapse;
  for (std::size_t i = 0; i < kFineDirectionCount; ++i) {
    collapse[std::string(to_string(static_cast<FineDirection>(i)))] =
        std::string(to_string(c.attributes.collapse.to_coarse[i]));
  }
  j["direction_collapse"] = collapse;
  j["speed_thresholds_kmh"] = c.attributes.speed.upper_kmh;
  j["accel_thresholds_kmh"] = c.attributes.accel.bounds_kmh;

  const auto& p = c.feasibility;
  ordered_json f;
  f["max_speed_increase_kmh"] = p.max_speed_increase_kmh;
  f["horizon_s"] = p.horizon_s;
  f["max_range"] = p.max_range;
  f["stationary_speed_cap_kmh"] = p.stationary_speed_cap_kmh;
  f["lane_assoc_radius"] = p.lane_assoc_radius;
  f["lane_assoc_heading_tol"] = p.lane_assoc_heading_tol_deg;
  f["allow_neighbor_transitions"] = p.allow_neighbor_transitions;
  f["sample_spacing"] = p.sample_spacing;
  j["feasibility"] = f;

  ordered_json b;
  b["v_stop"] = c.behavior.v_stop;
  b["dwell_s"] = c.behavior.dwell_s;
  b["delta_v_const_kmh"] = c.behavior.delta_v_const_kmh;
  j["behavior"] = b;

  ordered_json s;
  s["gt_fraction"] = c.sampler.gt_fraction;
  s["if_fraction"] = c.sampler.if_fraction;
  s["class_balanced"] = c.sampler.class_balanced;
  s["seed"] = c.sampler.seed;
  j["sampler"] = s;

  ordered_json l;
  l["sign"] = c.loss_sign == LossSign::kSum ? "sum" : "pseudocode_literal";
  l["score_kind"] = c.score_kind == ScoreKind::kLogits ? "logits" : "probabilities";
  j["loss"] = l;
  return j;
}

}  // namespace instructkit
