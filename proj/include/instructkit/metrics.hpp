#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "instructkit/labels.hpp"
#include "instructkit/motion_attributes.hpp"
#include "instructkit/scenario.hpp"

namespace instructkit {

struct XYPoint {
  double x = 0.0;
  double y = 0.0;
  bool valid = true;

  friend bool operator==(const XYPoint&, const XYPoint&) = default;
};

using XYTrajectory = std::vector<XYPoint>;

/// M candidate futures for one scenario, each t_pred steps long.
struct PredictionSet {
  std::string scenario_id;
  std::vector<XYTrajectory> trajectories;
  std::vector<double> scores;
  /// Present pose of the agent. When set it is prepended to every mode before
  /// direction extraction so predictions share the ground-truth window.
  std::optional<TrajectoryPoint> origin;

  std::size_t mode_count() const noexcept { return trajectories.size(); }

  /// Throws SchemaError if M = 0, lengths differ, or scores do not match M.
  void validate() const;
};

struct GaussianStep {
  double mu_x = 0.0;
  double mu_y = 0.0;
  double sigma_x = 1.0;
  double sigma_y = 1.0;
};

/// modes[m][t]: per-mode, per-step diagonal Gaussian.
struct GmmTrajectory {
  std::vector<std::vector<GaussianStep>> modes;
};

/// Kahan-free pairwise summation; the order of `values` is part of the result.
double pairwise_sum(std::span<const double> values) noexcept;
double pairwise_mean(std::span<const double> values) noexcept;

/// Converts a predicted mode into points carrying finite-difference speeds,
/// with the origin (if any) in front.
std::vector<TrajectoryPoint> prediction_points(const XYTrajectory& mode,
                                               const std::optional<TrajectoryPoint>& origin,
                                               double dt);

/// Coarse direction of one predicted mode. Throws UnclassifiableTrajectory.
DirectionLabel classify_prediction(const XYTrajectory& mode,
                                   const std::optional<TrajectoryPoint>& origin, double dt,
                                   const AttributeConfig& cfg = {});

struct ScenarioIfr {
  double value = 0.0;  // matches / M
  int matches = 0;
  int modes = 0;
  int unclassifiable = 0;  // counted as non-matches
};

/// Fraction of modes whose extracted direction equals the instruction.
ScenarioIfr ifr_scenario(DirectionLabel instructed, const PredictionSet& preds, double dt,
                         const AttributeConfig& cfg = {});

/// Corpus IFR: mean of per-scenario values in the given order.
double ifr_micro(std::span<const double> per_scenario) noexcept;

struct IfrRow {
  DirectionLabel instructed = DirectionLabel::kStraight;
  double value = 0.0;
};

struct MacroIfr {
  double macro = 0.0;
  double micro = 0.0;
  std::map<DirectionLabel, double> per_class;
  std::vector<DirectionLabel> absent;
};

/// Per-direction mean of per-scenario IFR, then the unweighted mean over the
/// directions present. Throws std::invalid_argument on an empty corpus.
MacroIfr ifr_macro(std::span<const IfrRow> rows);

/// Throws NoValidOverlap when no step is valid in both trajectories.
double ade(const XYTrajectory& gt, const XYTrajectory& pred);
/// Distance at the last step valid in both. Throws NoValidOverlap.
double fde(const XYTrajectory& gt, const XYTrajectory& pred);
double min_ade(const XYTrajectory& gt, const PredictionSet& preds);
double min_fde(const XYTrajectory& gt, const PredictionSet& preds);

struct DetectionSample {
  Decision predicted = Decision::kAccept;
  FeasTag tag = FeasTag::kGT;
};

struct TagAccuracy {
  std::optional<double> accuracy;  // empty when no sample had this tag
  int correct = 0;
  int total = 0;
};

struct DetectionAccuracy {
  TagAccuracy gt;
  TagAccuracy f;
  TagAccuracy infeasible;
};

/// GT and F rows are correct when accepted, IF rows when rejected.
DetectionAccuracy detection_accuracy(std::span<const DetectionSample> samples);

struct SafetySample {
  Decision predicted = Decision::kAccept;
  Safety tag = Safety::kSafe;
  bool with_context = false;
};

struct SafetyAccuracy {
  TagAccuracy safe_with_context;
  TagAccuracy safe_without_context;
  TagAccuracy unsafe_with_context;
  TagAccuracy unsafe_without_context;
};

SafetyAccuracy safety_accuracy(std::span<const SafetySample> samples);

/// Summed diagonal-Gaussian NLL (constants dropped) of `best_mode` at the
/// selected future steps. Steps invalid in `gt` are skipped.
/// Throws NonPositiveSigma, std::out_of_range for a bad index.
double gmm_nll(const GmmTrajectory& gmm, const XYTrajectory& gt, std::size_t best_mode,
               std::span<const int> t_select);

/// Mode whose means are closest to `gt` on average over the selected steps;
/// ties go to the lowest index.
std::size_t best_mode(const GmmTrajectory& gmm, const XYTrajectory& gt,
                      std::span<const int> t_select);
std::size_t best_mode(const PredictionSet& preds, const XYTrajectory& gt,
                      std::span<const int> t_select);

enum class ScoreKind { kLogits, kProbabilities };

/// Cross-entropy of the normalized scores against the one-hot best mode.
/// Logits are normalized with a log-softmax, probabilities by their sum.
double score_loss(std::span<const double> scores, std::size_t best_mode,
                  ScoreKind kind = ScoreKind::kLogits);

enum class LossSign { kSum, kPseudocodeLiteral };

/// NLL + CE by default; NLL - CE with kPseudocodeLiteral.
double combined_loss(double nll, double ce, LossSign sign = LossSign::kSum) noexcept;

}  // namespace instructkit
