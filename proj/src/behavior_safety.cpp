#include "instructkit/behavior_safety.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "instructkit/errors.hpp"
#include "instructkit/geometry.hpp"
#include "instructkit/motion_attributes.hpp"
#include "json_reader.hpp"

namespace instructkit {

namespace {

constexpr double kTimeTolerance = 1e-9;

double delta_v_kmh(const TrajectoryPoint& a, const TrajectoryPoint& b, double dt) {
  const double duration = (b.t_index - a.t_index) * dt;
  if (!(duration > 0.0)) return 0.0;
  return (b.speed - a.speed) * kKmhPerMps * (kAccelReferenceSeconds / duration);
}

}  // namespace

void BehaviorParams::validate() const {
  auto pos = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!pos(v_stop) || !pos(dwell_s) || !pos(delta_v_const_kmh)) {
    throw ConfigError("behavior parameters must be strictly positive");
  }
}

BehaviorLabel classify_behavior(std::span<const TrajectoryPoint> points, double dt,
                                const BehaviorParams& params) {
  if (points.size() < 2) {
    throw InsufficientPoints("behavior needs at least 2 valid points, got " +
                             std::to_string(points.size()));
  }
  const auto below = [&](const TrajectoryPoint& p) { return p.speed < params.v_stop; };
  const auto elapsed = [&](const TrajectoryPoint& p) {
    return (p.t_index - points.front().t_index) * dt;
  };
  const double total = elapsed(points.back());

  if (std::all_of(points.begin(), points.end(), below)) return BehaviorLabel::kNotMoving;

  bool head_at_rest = true;
  bool tail_at_rest = true;
  for (const auto& p : points) {
    if (elapsed(p) <= params.dwell_s + kTimeTolerance && !below(p)) head_at_rest = false;
    if (total - elapsed(p) <= params.dwell_s + kTimeTolerance && !below(p)) tail_at_rest = false;
  }
  // A later point must be moving, which holds since not every point is at rest.
  if (head_at_rest) return BehaviorLabel::kWaitingThenMoving;
  if (!below(points.front()) && tail_at_rest) return BehaviorLabel::kStopping;

  const double half = total / 2.0;
  const TrajectoryPoint* first_end = &points.front();
  const TrajectoryPoint* second_start = &points.back();
  for (const auto& p : points) {
    if (elapsed(p) <= half + kTimeTolerance) first_end = &p;
  }
  for (auto it = points.rbegin(); it != points.rend(); ++it) {
    if (elapsed(*it) >= half - kTimeTolerance) second_start = &*it;
  }
  const double c = params.delta_v_const_kmh;
  const double dv_first = delta_v_kmh(points.front(), *first_end, dt);
  const double dv_second = delta_v_kmh(*second_start, points.back(), dt);
  if (dv_first < -c && dv_second > c) return BehaviorLabel::kSlowingThenSpeeding;
  if (dv_first > c && dv_second < -c) return BehaviorLabel::kSpeedingThenSlowing;

  const double dv_total = delta_v_kmh(points.front(), points.back(), dt);
  if (dv_total >= c) return BehaviorLabel::kSpeedingUp;
  if (dv_total <= -c) return BehaviorLabel::kSlowingDown;
  return BehaviorLabel::kMaintainingSpeed;
}

BehaviorLabel classify_behavior(const AgentTrack& track, const HorizonConfig& horizon,
                                const BehaviorParams& params) {
  const auto window = future_window(horizon);
  return classify_behavior(valid_points(track, window.start, window.end), horizon.dt, params);
}

GuidelineBook::GuidelineBook(std::map<std::string, ScenarioGuidelines> types) {
  for (auto& [name, guidelines] : types) {
    std::size_t safe = 0;
    std::size_t unsafe = 0;
    std::array<std::optional<Safety>, kBehaviorCount> seen{};
    for (const auto& e : guidelines.entries) {
      (e.safety == Safety::kSafe ? safe : unsafe) += 1;
      auto& slot = seen[index_of(e.behavior)];
      if (slot && *slot != e.safety) {
        throw SchemaError("scenario type '" + name + "': behavior '" +
                          std::string(to_string(e.behavior)) +
                          "' is listed as both safe and unsafe");
      }
      slot = e.safety;
    }
    if (safe > kMaxEntriesPerSafety || unsafe > kMaxEntriesPerSafety) {
      throw CapError("scenario type '" + name + "' lists " + std::to_string(safe) + " safe and " +
                     std::to_string(unsafe) + " unsafe entries (at most 10 each)");
    }
    if (!guidelines.default_safety) {
      for (auto b : kAllBehaviors) {
        if (!seen[index_of(b)]) {
          throw CoverageError("scenario type '" + name + "' does not cover behavior '" +
                              std::string(to_string(b)) + "' and declares no default");
        }
      }
    }
    types_.emplace(name, std::move(guidelines));
  }
}

bool GuidelineBook::contains(std::string_view scenario_type) const {
  return types_.find(scenario_type) != types_.end();
}

std::pair<Safety, std::string> GuidelineBook::lookup(std::string_view scenario_type,
                                                     BehaviorLabel behavior) const {
  const auto it = types_.find(scenario_type);
  if (it == types_.end()) {
    throw UnknownScenarioType("unknown scenario type '" + std::string(scenario_type) + "'");
  }
  for (const auto& e : it->second.entries) {
    if (e.behavior == behavior) return {e.safety, e.template_text};
  }
  // Construction guarantees a default here.
  return {*it->second.default_safety, std::string(behavior_phrase(behavior)) + "."};
}

GuidelineBook load_guidelines(std::string_view json_text) {
  using Reader = detail::ObjectReader<SchemaError>;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("malformed guidelines JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("guidelines: expected an object of scenario types");

  auto parse_safety = [](const std::string& s, const std::string& where) {
    const auto v = safety_from_string(s);
    if (!v) throw SchemaError(where + ": safety must be \"safe\" or \"unsafe\"");
    return *v;
  };

  std::map<std::string, ScenarioGuidelines> types;
  for (auto it = j.begin(); it != j.end(); ++it) {
    Reader r(it.value(), it.key());
    ScenarioGuidelines g;
    if (const auto* d = r.optional("default")) {
      g.default_safety = parse_safety(Reader::as_string(*d, r.child("default")), r.child("default"));
    }
    const auto& entries = Reader::as_array(r.required("entries"), r.child("entries"));
    for (std::size_t i = 0; i < entries.size(); ++i) {
      Reader er(entries[i], r.child("entries") + "[" + std::to_string(i) + "]");
      GuidelineEntry e;
      const auto behavior_name = er.string("behavior");
      const auto behavior = behavior_from_string(behavior_name);
      if (!behavior) {
        throw SchemaError(er.child("behavior") + ": unknown behavior '" + behavior_name + "'");
      }
      e.behavior = *behavior;
      e.safety = parse_safety(er.string("safety"), er.child("safety"));
      e.template_text = er.string("template");
      er.finish();
      g.entries.push_back(std::move(e));
    }
    r.finish();
    types.emplace(it.key(), std::move(g));
  }
  return GuidelineBook(std::move(types));
}

std::pair<Safety, std::string> label_safety(std::string_view scenario_type, BehaviorLabel behavior,
                                            const GuidelineBook& book) {
  return book.lookup(scenario_type, behavior);
}

}  // namespace instructkit
