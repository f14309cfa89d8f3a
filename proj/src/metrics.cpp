#include "instructkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "instructkit/errors.hpp"

namespace instructkit {

void PredictionSet::validate() const {
  if (trajectories.empty()) throw SchemaError("prediction '" + scenario_id + "' has no modes");
  for (const auto& t : trajectories) {
    if (t.size() != trajectories.front().size()) {
      throw SchemaError("prediction '" + scenario_id + "': modes differ in length");
    }
  }
  if (scores.size() != trajectories.size()) {
    throw SchemaError("prediction '" + scenario_id + "': " + std::to_string(scores.size()) +
                      " scores for " + std::to_string(trajectories.size()) + " modes");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) throw SchemaError("prediction '" + scenario_id + "': non-finite score");
  }
}

double pairwise_sum(std::span<const double> values) noexcept {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double pairwise_mean(std::span<const double> values) noexcept {
  if (values.empty()) return 0.0;
  return pairwise_sum(values) / static_cast<double>(values.size());
}

std::vector<TrajectoryPoint> prediction_points(const XYTrajectory& mode,
                                               const std::optional<TrajectoryPoint>& origin,
                                               double dt) {
  std::vector<TrajectoryPoint> pts;
  pts.reserve(mode.size() + 1);
  if (origin) {
    auto o = *origin;
    o.t_index = 0;
    o.valid = true;
    pts.push_back(o);
  }
  for (std::size_t i = 0; i < mode.size(); ++i) {
    if (!mode[i].valid) continue;
    TrajectoryPoint p;
    p.x = mode[i].x;
    p.y = mode[i].y;
    p.t_index = static_cast<int>(i) + 1;
    pts.push_back(p);
  }
  // Backward differences; the first point without an origin takes the forward one.
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double d = std::hypot(pts[i].x - pts[i - 1].x, pts[i].y - pts[i - 1].y);
    pts[i].speed = d / ((pts[i].t_index - pts[i - 1].t_index) * dt);
    pts[i].heading = std::atan2(pts[i].y - pts[i - 1].y, pts[i].x - pts[i - 1].x);
  }
  if (!origin && pts.size() >= 2) {
    pts[0].speed = pts[1].speed;
    pts[0].heading = pts[1].heading;
  }
  return pts;
}

DirectionLabel classify_prediction(const XYTrajectory& mode,
                                   const std::optional<TrajectoryPoint>& origin, double dt,
                                   const AttributeConfig& cfg) {
  const auto pts = prediction_points(mode, origin, dt);
  if (pts.size() < 2) {
    throw UnclassifiableTrajectory("predicted mode has " + std::to_string(pts.size()) +
                                   " valid points");
  }
  return collapse_direction(classify_direction_fine(pts, cfg.direction, cfg.epsilon_disp),
                            cfg.collapse);
}

ScenarioIfr ifr_scenario(DirectionLabel instructed, const PredictionSet& preds, double dt,
                         const AttributeConfig& cfg) {
  preds.validate();
  ScenarioIfr r;
  r.modes = static_cast<int>(preds.mode_count());
  for (const auto& mode : preds.trajectories) {
    try {
      if (classify_prediction(mode, preds.origin, dt, cfg) == instructed) ++r.matches;
    } catch (const UnclassifiableTrajectory&) {
      ++r.unclassifiable;
    }
  }
  r.value = static_cast<double>(r.matches) / r.modes;
  return r;
}

double ifr_micro(std::span<const double> per_scenario) noexcept {
  return pairwise_mean(per_scenario);
}

MacroIfr ifr_macro(std::span<const IfrRow> rows) {
  if (rows.empty()) throw std::invalid_argument("ifr_macro needs at least one row");
  std::map<DirectionLabel, std::vector<double>> by_class;
  std::vector<double> all;
  all.reserve(rows.size());
  for (const auto& r : rows) {
    by_class[r.instructed].push_back(r.value);
    all.push_back(r.value);
  }
  MacroIfr out;
  std::vector<double> class_means;
  for (auto d : kAllDirections) {
    const auto it = by_class.find(d);
    if (it == by_class.end()) {
      out.absent.push_back(d);
      continue;
    }
    const double m = pairwise_mean(it->second);
    out.per_class[d] = m;
    class_means.push_back(m);
  }
  out.macro = pairwise_mean(class_means);
  out.micro = pairwise_mean(all);
  return out;
}

namespace {

void check_aligned(const XYTrajectory& gt, const XYTrajectory& pred) {
  if (gt.size() != pred.size()) {
    throw SchemaError("trajectory lengths differ: " + std::to_string(gt.size()) + " vs " +
                      std::to_string(pred.size()));
  }
}

double dist(const XYPoint& a, const XYPoint& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

double ade(const XYTrajectory& gt, const XYTrajectory& pred) {
  check_aligned(gt, pred);
  std::vector<double> d;
  d.reserve(gt.size());
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt[i].valid && pred[i].valid) d.push_back(dist(gt[i], pred[i]));
  }
  if (d.empty()) throw NoValidOverlap("no step is valid in both trajectories");
  return pairwise_mean(d);
}

double fde(const XYTrajectory& gt, const XYTrajectory& pred) {
  check_aligned(gt, pred);
  for (std::size_t i = gt.size(); i-- > 0;) {
    if (gt[i].valid && pred[i].valid) return dist(gt[i], pred[i]);
  }
  throw NoValidOverlap("no step is valid in both trajectories");
}

double min_ade(const XYTrajectory& gt, const PredictionSet& preds) {
  preds.validate();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : preds.trajectories) best = std::min(best, ade(gt, m));
  return best;
}

double min_fde(const XYTrajectory& gt, const PredictionSet& preds) {
  preds.validate();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : preds.trajectories) best = std::min(best, fde(gt, m));
  return best;
}

namespace {

void count(TagAccuracy& acc, bool correct) {
  ++acc.total;
  if (correct) ++acc.correct;
  acc.accuracy = static_cast<double>(acc.correct) / acc.total;
}

}  // namespace

DetectionAccuracy detection_accuracy(std::span<const DetectionSample> samples) {
  DetectionAccuracy out;
  for (const auto& s : samples) {
    const bool accepted = s.predicted == Decision::kAccept;
    switch (s.tag) {
      case FeasTag::kGT: count(out.gt, accepted); break;
      case FeasTag::kF: count(out.f, accepted); break;
      case FeasTag::kIF: count(out.infeasible, !accepted); break;
    }
  }
  return out;
}

SafetyAccuracy safety_accuracy(std::span<const SafetySample> samples) {
  SafetyAccuracy out;
  for (const auto& s : samples) {
    const bool accepted = s.predicted == Decision::kAccept;
    if (s.tag == Safety::kSafe) {
      count(s.with_context ? out.safe_with_context : out.safe_without_context, accepted);
    } else {
      count(s.with_context ? out.unsafe_with_context : out.unsafe_without_context, !accepted);
    }
  }
  return out;
}

namespace {

std::size_t checked_step(int t, std::size_t n) {
  if (t < 0 || static_cast<std::size_t>(t) >= n) {
    throw std::out_of_range("t_select step " + std::to_string(t) + " outside 0.." +
                            std::to_string(n) + ")");
  }
  return static_cast<std::size_t>(t);
}

}  // namespace

double gmm_nll(const GmmTrajectory& gmm, const XYTrajectory& gt, std::size_t best_mode,
               std::span<const int> t_select) {
  if (best_mode >= gmm.modes.size()) {
    throw std::out_of_range("best_mode " + std::to_string(best_mode) + " of " +
                            std::to_string(gmm.modes.size()) + " modes");
  }
  const auto& mode = gmm.modes[best_mode];
  std::vector<double> terms;
  terms.reserve(t_select.size());
  for (int t : t_select) {
    const std::size_t i = checked_step(t, std::min(mode.size(), gt.size()));
    if (!gt[i].valid) continue;
    const auto& g = mode[i];
    if (!(g.sigma_x > 0.0) || !(g.sigma_y > 0.0)) {
      throw NonPositiveSigma("sigma must be positive at step " + std::to_string(t));
    }
    const double zx = (gt[i].x - g.mu_x) / g.sigma_x;
    const double zy = (gt[i].y - g.mu_y) / g.sigma_y;
    terms.push_back(std::log(g.sigma_x) + std::log(g.sigma_y) + 0.5 * (zx * zx + zy * zy));
  }
  return pairwise_sum(terms);
}

namespace {

template <class PointAt>
std::size_t argmin_mean_distance(std::size_t modes, std::size_t steps, const XYTrajectory& gt,
                                 std::span<const int> t_select, PointAt point_at) {
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < modes; ++m) {
    std::vector<double> d;
    for (int t : t_select) {
      const std::size_t i = checked_step(t, std::min(steps, gt.size()));
      const auto p = point_at(m, i);
      if (!gt[i].valid || !p.valid) continue;
      d.push_back(dist(gt[i], p));
    }
    const double v = d.empty() ? std::numeric_limits<double>::infinity() : pairwise_mean(d);
    if (v < best_value) {
      best_value = v;
      best = m;
    }
  }
  return best;
}

}  // namespace

std::size_t best_mode(const GmmTrajectory& gmm, const XYTrajectory& gt,
                      std::span<const int> t_select) {
  if (gmm.modes.empty()) throw std::invalid_argument("best_mode needs at least one mode");
  std::size_t steps = std::numeric_limits<std::size_t>::max();
  for (const auto& m : gmm.modes) steps = std::min(steps, m.size());
  return argmin_mean_distance(gmm.modes.size(), steps, gt, t_select,
                              [&](std::size_t m, std::size_t i) {
                                const auto& g = gmm.modes[m][i];
                                return XYPoint{g.mu_x, g.mu_y, true};
                              });
}

std::size_t best_mode(const PredictionSet& preds, const XYTrajectory& gt,
                      std::span<const int> t_select) {
  preds.validate();
  return argmin_mean_distance(preds.mode_count(), preds.trajectories.front().size(), gt, t_select,
                              [&](std::size_t m, std::size_t i) {
                                return preds.trajectories[m][i];
                              });
}

double score_loss(std::span<const double> scores, std::size_t best_mode, ScoreKind kind) {
  if (scores.empty()) throw std::invalid_argument("score_loss needs at least one score");
  if (best_mode >= scores.size()) throw std::out_of_range("best_mode outside the scores");
  if (kind == ScoreKind::kLogits) {
    const double mx = *std::max_element(scores.begin(), scores.end());
    std::vector<double> e;
    e.reserve(scores.size());
    for (double s : scores) e.push_back(std::exp(s - mx));
    return std::log(pairwise_sum(e)) - (scores[best_mode] - mx);
  }
  for (double p : scores) {
    if (!(p >= 0.0)) throw std::invalid_argument("probabilities must be non-negative");
  }
  const double total = pairwise_sum(scores);
  if (!(total > 0.0)) throw std::invalid_argument("probabilities sum to zero");
  return -std::log(scores[best_mode] / total);
}

double combined_loss(double nll, double ce, LossSign sign) noexcept {
  return sign == LossSign::kSum ? nll + ce : nll - ce;
}

}  // namespace instructkit
