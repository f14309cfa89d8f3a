#include "instructkit/instruction_gen.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "instructkit/errors.hpp"
#include "json_reader.hpp"

namespace instructkit {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json step_to_json(const StepAttributes& s) {
  ordered_json j;
  j["direction"] = std::string(to_string(s.direction));
  j["speed"] = std::string(to_string(s.speed));
  j["accel"] = std::string(to_string(s.accel));
  return j;
}

template <class E, class Fn>
E parse_enum(const std::string& text, const std::string& where, Fn from_string) {
  const auto v = from_string(text);
  if (!v) throw SchemaError(where + ": unknown value '" + text + "'");
  return *v;
}

StepAttributes step_from_json(const json& j, const std::string& where) {
  detail::ObjectReader<SchemaError> r(j, where);
  StepAttributes s;
  s.direction = parse_enum<DirectionLabel>(r.string("direction"), r.child("direction"),
                                           direction_from_string);
  s.speed = parse_enum<SpeedCategory>(r.string("speed"), r.child("speed"),
                                      speed_category_from_string);
  s.accel = parse_enum<AccelCategory>(r.string("accel"), r.child("accel"),
                                      accel_category_from_string);
  r.finish();
  return s;
}

std::string render_step(const StepAttributes& s) {
  return std::string(display_name(s.direction)) + ", " + std::string(display_name(s.speed)) +
         ", " + std::string(display_name(s.accel));
}

}  // namespace

void InstructionRecord::validate() const {
  if (feas_tag.has_value() == safety_tag.has_value()) {
    throw SchemaError("record '" + scenario_id + "': exactly one of feas_tag and safety_tag");
  }
  const bool accept = decision == Decision::kAccept;
  if (feas_tag && accept != (*feas_tag != FeasTag::kIF)) {
    throw SchemaError("record '" + scenario_id + "': decision disagrees with feas_tag");
  }
  if (safety_tag && accept != (*safety_tag == Safety::kSafe)) {
    throw SchemaError("record '" + scenario_id + "': decision disagrees with safety_tag");
  }
}

ordered_json record_to_json(const InstructionRecord& r) {
  ordered_json j;
  j["scenario_id"] = r.scenario_id;
  j["focal_agent_id"] = r.focal_agent_id;
  j["instruction_text"] = r.instruction_text;
  j["caption_text"] = r.caption_text;
  j["decision"] = std::string(to_string(r.decision));
  if (r.feas_tag) j["feas_tag"] = std::string(to_string(*r.feas_tag));
  if (r.safety_tag) j["safety_tag"] = std::string(to_string(*r.safety_tag));
  if (r.direction) j["direction"] = std::string(to_string(*r.direction));
  if (r.behavior) j["behavior"] = std::string(to_string(*r.behavior));
  if (r.two_step) {
    ordered_json ts;
    ts["step1"] = step_to_json(r.two_step->first);
    ts["step2"] = step_to_json(r.two_step->second);
    j["two_step"] = std::move(ts);
  }
  j["has_gt_trajectory"] = r.has_gt_trajectory;
  if (r.with_context) j["with_context"] = true;
  return j;
}

InstructionRecord record_from_json(const json& j) {
  detail::ObjectReader<SchemaError> r(j, "record");
  InstructionRecord rec;
  rec.scenario_id = r.string("scenario_id");
  rec.focal_agent_id = r.string("focal_agent_id");
  rec.instruction_text = r.string("instruction_text");
  rec.caption_text = r.string("caption_text");
  rec.decision = parse_enum<Decision>(r.string("decision"), r.child("decision"),
                                      decision_from_string);
  if (const auto* v = r.optional("feas_tag")) {
    rec.feas_tag = parse_enum<FeasTag>(r.as_string(*v, r.child("feas_tag")), r.child("feas_tag"),
                                       feas_tag_from_string);
  }
  if (const auto* v = r.optional("safety_tag")) {
    rec.safety_tag = parse_enum<Safety>(r.as_string(*v, r.child("safety_tag")),
                                        r.child("safety_tag"), safety_from_string);
  }
  if (const auto* v = r.optional("direction")) {
    rec.direction = parse_enum<DirectionLabel>(r.as_string(*v, r.child("direction")),
                                               r.child("direction"), direction_from_string);
  }
  if (const auto* v = r.optional("behavior")) {
    rec.behavior = parse_enum<BehaviorLabel>(r.as_string(*v, r.child("behavior")),
                                             r.child("behavior"), behavior_from_string);
  }
  if (const auto* v = r.optional("two_step")) {
    detail::ObjectReader<SchemaError> tr(*v, r.child("two_step"));
    TwoStep ts;
    ts.first = step_from_json(tr.required("step1"), tr.child("step1"));
    ts.second = step_from_json(tr.required("step2"), tr.child("step2"));
    tr.finish();
    rec.two_step = ts;
  }
  rec.has_gt_trajectory = r.boolean("has_gt_trajectory");
  if (const auto* v = r.optional("with_context")) {
    rec.with_context = r.as_bool(*v, r.child("with_context"));
  }
  r.finish();
  rec.validate();
  return rec;
}

std::string render_instruction(DirectionLabel direction) {
  return "Reach the final direction: " + std::string(display_name(direction)) + ".";
}

std::string render_behavior_instruction(BehaviorLabel behavior) {
  return std::string(behavior_phrase(behavior)) + ".";
}

std::string render_caption(DirectionLabel direction, const std::optional<TwoStep>& two_step) {
  std::string out = "[Accept] Final direction: " + std::string(display_name(direction)) + ".";
  if (two_step) {
    out += " Step 1: " + render_step(two_step->first) + ".";
    out += " Step 2: " + render_step(two_step->second) + ".";
  }
  return out;
}

std::string render_reject_caption(DirectionLabel instructed) {
  return "[Reject] The instruction " + std::string(display_name(instructed)) + " is infeasible.";
}

std::string render_behavior_caption(Decision decision, std::string_view guideline_template) {
  return (decision == Decision::kAccept ? "[Accept] " : "[Reject] ") +
         std::string(guideline_template);
}

InstructionRecord build_direction_row(const Scenario& scenario, const FeasibilityReport& report,
                                      const TwoStep& gt_two_step, DirectionLabel instructed) {
  InstructionRecord r;
  r.scenario_id = scenario.scenario_id;
  r.focal_agent_id = scenario.focal_agent_id;
  r.direction = instructed;
  r.feas_tag = tag_instruction(report, instructed);
  r.decision = *r.feas_tag == FeasTag::kIF ? Decision::kReject : Decision::kAccept;
  r.instruction_text = render_instruction(instructed);
  switch (*r.feas_tag) {
    case FeasTag::kGT:
      r.two_step = gt_two_step;
      r.caption_text = render_caption(instructed, gt_two_step);
      r.has_gt_trajectory = true;
      break;
    case FeasTag::kF:
      r.caption_text = render_caption(instructed, std::nullopt);
      break;
    case FeasTag::kIF:
      r.caption_text = render_reject_caption(instructed);
      break;
  }
  return r;
}

InstructionRecord build_direction_row(const Scenario& scenario, DirectionLabel instructed,
                                      const FeasibilityParams& params,
                                      const AttributeConfig& cfg) {
  const auto report = feasibility_set(scenario, params, cfg);
  const auto two_step = classify_two_step(scenario.focal(), scenario.horizon, cfg);
  return build_direction_row(scenario, report, two_step, instructed);
}

std::vector<InstructionRecord> build_direction_rows(const Scenario& scenario,
                                                    const FeasibilityParams& params,
                                                    const AttributeConfig& cfg) {
  const auto report = feasibility_set(scenario, params, cfg);
  const auto two_step = classify_two_step(scenario.focal(), scenario.horizon, cfg);
  std::vector<InstructionRecord> rows;
  rows.reserve(kDirectionCount);
  for (auto d : kAllDirections) rows.push_back(build_direction_row(scenario, report, two_step, d));
  return rows;
}

InstructionRecord build_behavior_row(const Scenario& scenario, BehaviorLabel instructed,
                                     BehaviorLabel actual, const GuidelineBook& book) {
  if (!scenario.scenario_type) {
    throw UnknownScenarioType("scenario '" + scenario.scenario_id + "' has no scenario_type");
  }
  const auto [safety, text] = label_safety(*scenario.scenario_type, instructed, book);
  InstructionRecord r;
  r.scenario_id = scenario.scenario_id;
  r.focal_agent_id = scenario.focal_agent_id;
  r.behavior = instructed;
  r.safety_tag = safety;
  r.decision = safety == Safety::kSafe ? Decision::kAccept : Decision::kReject;
  r.instruction_text = render_behavior_instruction(instructed);
  r.caption_text = render_behavior_caption(r.decision, text);
  r.has_gt_trajectory = instructed == actual && safety == Safety::kSafe;
  return r;
}

std::vector<InstructionRecord> build_behavior_rows(const Scenario& scenario,
                                                   const GuidelineBook& book,
                                                   const HorizonConfig& horizon,
                                                   const BehaviorParams& params) {
  const auto actual = classify_behavior(scenario.focal(), horizon, params);
  std::vector<InstructionRecord> rows;
  rows.reserve(kBehaviorCount);
  for (auto b : kAllBehaviors) rows.push_back(build_behavior_row(scenario, b, actual, book));
  return rows;
}

void SamplerConfig::validate() const {
  if (!(gt_fraction >= 0.0 && gt_fraction <= 1.0) || !(if_fraction >= 0.0 && if_fraction <= 1.0)) {
    throw ConfigError("sampler fractions must lie in [0, 1]");
  }
  if (std::abs(gt_fraction + if_fraction - 1.0) > 1e-9) {
    throw ConfigError("sampler.gt_fraction + sampler.if_fraction must equal 1");
  }
}

namespace {

int class_key(const InstructionRecord& r) {
  if (r.direction) return static_cast<int>(index_of(*r.direction));
  if (r.behavior) return static_cast<int>(index_of(*r.behavior));
  return -1;
}

}  // namespace

TrainingMixSampler::TrainingMixSampler(std::vector<InstructionRecord> rows,
                                       const SamplerConfig& cfg)
    : rows_(std::move(rows)), balanced_(cfg.class_balanced), rng_(cfg.seed) {
  cfg.validate();
  std::stable_sort(rows_.begin(), rows_.end(), [](const auto& a, const auto& b) {
    return std::forward_as_tuple(a.scenario_id, class_key(a)) <
           std::forward_as_tuple(b.scenario_id, class_key(b));
  });

  const bool direction_mode =
      std::any_of(rows_.begin(), rows_.end(), [](const auto& r) { return r.feas_tag.has_value(); });
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    if (r.feas_tag.has_value() != direction_mode) {
      throw SchemaError("sampler input mixes direction and behavior rows");
    }
    const bool accept = direction_mode ? *r.feas_tag == FeasTag::kGT : *r.safety_tag == Safety::kSafe;
    const bool reject = direction_mode ? *r.feas_tag == FeasTag::kIF : *r.safety_tag == Safety::kUnsafe;
    if (accept) accept_pool_.push_back(i);
    if (reject) reject_pool_.push_back(i);
  }

  if (cfg.gt_fraction > 0.0 && accept_pool_.empty()) {
    throw EmptyClass(direction_mode ? "no GT rows to sample" : "no safe rows to sample");
  }
  if (cfg.if_fraction > 0.0 && reject_pool_.empty()) {
    throw EmptyClass(direction_mode ? "no IF rows to sample" : "no unsafe rows to sample");
  }

  for (auto i : accept_pool_) class_keys_.push_back(class_key(rows_[i]));
  std::sort(class_keys_.begin(), class_keys_.end());
  class_keys_.erase(std::unique(class_keys_.begin(), class_keys_.end()), class_keys_.end());
  accept_by_class_.resize(class_keys_.size());
  for (auto i : accept_pool_) {
    const auto pos = std::lower_bound(class_keys_.begin(), class_keys_.end(), class_key(rows_[i]));
    accept_by_class_[static_cast<std::size_t>(pos - class_keys_.begin())].push_back(i);
  }

  accept_threshold_ = static_cast<std::uint64_t>(std::llround(cfg.gt_fraction * 4294967296.0));
}

std::uint64_t TrainingMixSampler::bounded(std::uint64_t n) {
  // Lemire, "Fast Random Integer Generation in an Interval" (2019).
  std::uint64_t x = rng_();
  unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      x = rng_();
      m = static_cast<unsigned __int128>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

const InstructionRecord& TrainingMixSampler::next() {
  const bool accept = (rng_() >> 32) < accept_threshold_;
  if (accept) {
    if (balanced_) {
      const auto& bucket = accept_by_class_[bounded(accept_by_class_.size())];
      return rows_[bucket[bounded(bucket.size())]];
    }
    return rows_[accept_pool_[bounded(accept_pool_.size())]];
  }
  return rows_[reject_pool_[bounded(reject_pool_.size())]];
}

std::vector<InstructionRecord> sample_training_mix(std::vector<InstructionRecord> rows,
                                                   const SamplerConfig& cfg, std::size_t count) {
  TrainingMixSampler sampler(std::move(rows), cfg);
  std::vector<InstructionRecord> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sampler.next());
  return out;
}

}  // namespace instructkit
