#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "instructkit/labels.hpp"
#include "instructkit/scenario.hpp"

namespace instructkit {

struct BehaviorParams {
  double v_stop = 0.5;              // m/s
  double dwell_s = 1.0;             // s
  double delta_v_const_kmh = 6.0;   // km/h over 8 s

  void validate() const;  // throws ConfigError
};

/// Meta-behavior of a speed profile. `points` are valid and time-ordered;
/// their t_index and `dt` place them in time. Throws InsufficientPoints.
BehaviorLabel classify_behavior(std::span<const TrajectoryPoint> points, double dt,
                                const BehaviorParams& params = {});

/// Behavior over the future window of `track`.
BehaviorLabel classify_behavior(const AgentTrack& track, const HorizonConfig& horizon,
                                const BehaviorParams& params = {});

inline constexpr std::size_t kMaxEntriesPerSafety = 10;

struct GuidelineEntry {
  BehaviorLabel behavior = BehaviorLabel::kNotMoving;
  Safety safety = Safety::kSafe;
  std::string template_text;
};

struct ScenarioGuidelines {
  std::optional<Safety> default_safety;
  std::vector<GuidelineEntry> entries;
};

/// Per-scenario-type safety metadata. Immutable once loaded.
class GuidelineBook {
 public:
  GuidelineBook() = default;

  /// Validates caps, coverage and per-behavior consistency.
  /// Throws SchemaError, CapError or CoverageError.
  explicit GuidelineBook(std::map<std::string, ScenarioGuidelines> types);

  bool contains(std::string_view scenario_type) const;
  const std::map<std::string, ScenarioGuidelines, std::less<>>& types() const noexcept {
    return types_;
  }

  /// Safety and template for a behavior; the first matching entry wins, then
  /// the type default with a generic template. Throws UnknownScenarioType.
  std::pair<Safety, std::string> lookup(std::string_view scenario_type,
                                        BehaviorLabel behavior) const;

 private:
  std::map<std::string, ScenarioGuidelines, std::less<>> types_;
};

/// Parses the guidelines JSON document.
GuidelineBook load_guidelines(std::string_view json_text);

std::pair<Safety, std::string> label_safety(std::string_view scenario_type, BehaviorLabel behavior,
                                            const GuidelineBook& book);

}  // namespace instructkit
