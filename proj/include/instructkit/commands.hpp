#pragma once

// Subcommand bodies shared by the CLI and the Python module. Inputs and
// outputs are whole JSONL/JSON documents held in memory; each output line is
// one compact JSON object and lines are sorted by scenario_id.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "instructkit/behavior_safety.hpp"
#include "instructkit/config.hpp"
#include "instructkit/metrics.hpp"

namespace instructkit {

/// Malformed input file. The message names the offending line. CLI exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitConfig = 2;

/// One row per scenario: fine/coarse direction, speed and acceleration
/// categories, two-step tuple and behavior. Scenarios that cannot be
/// classified yield {"scenario_id", "error", "message"} rows.
std::string cmd_extract(std::string_view scenarios_jsonl, const Config& config);

/// One FeasibilityReport row per scenario (error rows as above).
std::string cmd_feasibility(std::string_view scenarios_jsonl, const Config& config);

enum class GenMode { kDirection, kBehavior };

struct GenOptions {
  GenMode mode = GenMode::kDirection;
  std::optional<GuidelineBook> guidelines;  // required in behavior mode
  /// When set, `count` rows are drawn with the training-mix sampler;
  /// otherwise every row is emitted.
  bool sample = false;
  std::optional<std::size_t> count;  // default: number of rows
};

std::string cmd_gen(std::string_view scenarios_jsonl, const Config& config,
                    const GenOptions& options);

struct EvalInputs {
  std::string_view dataset_jsonl;
  std::string_view predictions_jsonl;
  /// Optional scenarios supplying ground-truth futures and origins.
  std::optional<std::string_view> scenarios_jsonl;
};

/// Evaluation report (pretty-printed JSON). Rates lie in [0, 1]; the
/// "percent" block repeats them multiplied by 100.
std::string cmd_evaluate(const EvalInputs& inputs, const Config& config);

/// Per-class counts of a dataset (pretty-printed JSON).
std::string cmd_stats(std::string_view dataset_jsonl, const Config& config);

struct SynthOutputs {
  std::string corpus;       // scenarios JSONL
  std::string expected;     // analytic labels, one row per scenario
  std::string predictions;  // one prediction record per scenario
};

/// Synthetic corpus. Prediction records instruct the ground-truth direction
/// and keep (index mod 7) of the six modes on it.
SynthOutputs cmd_synth(std::string_view suite, std::size_t count, std::uint64_t seed,
                       const Config& config);

/// Prediction record as documented in scenario_io.hpp.
struct PredictionRecord {
  PredictionSet set;
  std::optional<DirectionLabel> direction;
  std::optional<BehaviorLabel> behavior;
  std::optional<Decision> decision;
  std::optional<ScoreKind> score_kind;
  std::optional<GmmTrajectory> gmm;
  std::optional<XYTrajectory> ground_truth;
};

PredictionRecord prediction_from_json(const nlohmann::json& j);
nlohmann::ordered_json prediction_to_json(const PredictionRecord& record);

/// Non-blank lines with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::string_view>> jsonl_lines(std::string_view text);

}  // namespace instructkit
