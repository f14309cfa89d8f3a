#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "instructkit/behavior_safety.hpp"
#include "instructkit/feasibility.hpp"
#include "instructkit/labels.hpp"
#include "instructkit/motion_attributes.hpp"
#include "instructkit/scenario.hpp"

namespace instructkit {

/// One dataset row. Direction-mode rows carry feas_tag, behavior-mode rows
/// carry safety_tag; never both.
struct InstructionRecord {
  std::string scenario_id;
  std::string focal_agent_id;
  std::string instruction_text;
  std::string caption_text;
  Decision decision = Decision::kAccept;
  std::optional<FeasTag> feas_tag;
  std::optional<Safety> safety_tag;
  std::optional<DirectionLabel> direction;
  std::optional<BehaviorLabel> behavior;
  std::optional<TwoStep> two_step;
  bool has_gt_trajectory = false;
  bool with_context = false;

  /// Checks the decision/tag invariants; throws SchemaError.
  void validate() const;

  friend bool operator==(const InstructionRecord&, const InstructionRecord&) = default;
};

nlohmann::ordered_json record_to_json(const InstructionRecord& record);
InstructionRecord record_from_json(const nlohmann::json& j);

std::string render_instruction(DirectionLabel direction);
std::string render_behavior_instruction(BehaviorLabel behavior);

/// Accept caption with the plan; without a plan only the final direction is named.
std::string render_caption(DirectionLabel direction, const std::optional<TwoStep>& two_step);
std::string render_reject_caption(DirectionLabel instructed);
std::string render_behavior_caption(Decision decision, std::string_view guideline_template);

/// Row for one instructed direction, given the scenario's feasibility report
/// and its ground-truth two-step breakdown.
InstructionRecord build_direction_row(const Scenario& scenario, const FeasibilityReport& report,
                                      const TwoStep& gt_two_step, DirectionLabel instructed);

/// Computes feasibility and the two-step breakdown, then builds the row.
InstructionRecord build_direction_row(const Scenario& scenario, DirectionLabel instructed,
                                      const FeasibilityParams& params = {},
                                      const AttributeConfig& cfg = {});

/// Rows for all five directions of one scenario.
std::vector<InstructionRecord> build_direction_rows(const Scenario& scenario,
                                                    const FeasibilityParams& params = {},
                                                    const AttributeConfig& cfg = {});

/// Row for one instructed behavior; `actual` is the behavior of the recorded future.
InstructionRecord build_behavior_row(const Scenario& scenario, BehaviorLabel instructed,
                                     BehaviorLabel actual, const GuidelineBook& book);

/// Rows for every behavior of one scenario (requires scenario_type).
std::vector<InstructionRecord> build_behavior_rows(const Scenario& scenario,
                                                   const GuidelineBook& book,
                                                   const HorizonConfig& horizon,
                                                   const BehaviorParams& params = {});

struct SamplerConfig {
  double gt_fraction = 0.7;
  double if_fraction = 0.3;
  bool class_balanced = true;
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError
};

/// Seeded training-mixture stream over a fixed row set.
///
/// The generator is std::mt19937_64, seeded with `seed` through its
/// single-integer constructor. Each draw consumes one 64-bit output for the
/// pool choice (accepted pool iff the top 32 bits are below
/// round(gt_fraction * 2^32)), then bounded integers produced by Lemire's
/// multiply-shift method with rejection: one for the class when balancing,
/// one for the row. No floating point is involved after construction, so the
/// stream depends only on the seed and the row order.
///
/// Direction mode: accepted pool = GT rows, rejected pool = IF rows, classes
/// are directions. Behavior mode: Safe and Unsafe rows, classes are behaviors.
/// Rows are ordered by (scenario_id, direction/behavior) before sampling.
class TrainingMixSampler {
 public:
  /// Throws EmptyClass when a pool with non-zero probability has no rows.
  TrainingMixSampler(std::vector<InstructionRecord> rows, const SamplerConfig& cfg);

  const InstructionRecord& next();

  /// Classes the balanced draw cycles through, in label order.
  const std::vector<int>& classes() const noexcept { return class_keys_; }

 private:
  std::uint64_t bounded(std::uint64_t n);

  std::vector<InstructionRecord> rows_;
  std::vector<std::size_t> accept_pool_;
  std::vector<std::size_t> reject_pool_;
  std::vector<int> class_keys_;
  std::vector<std::vector<std::size_t>> accept_by_class_;
  std::uint64_t accept_threshold_ = 0;
  bool balanced_ = true;
  std::mt19937_64 rng_;
};

/// Convenience wrapper: `count` draws.
std::vector<InstructionRecord> sample_training_mix(std::vector<InstructionRecord> rows,
                                                   const SamplerConfig& cfg, std::size_t count);

}  // namespace instructkit
