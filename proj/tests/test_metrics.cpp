#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "doctest.h"

#include "instructkit/errors.hpp"
#include "instructkit/metrics.hpp"
#include "instructkit/synth.hpp"
#include "support.hpp"

using namespace instructkit;

namespace {

const HorizonConfig kH;

XYTrajectory line(double dx, double dy, int n = 80, double step = 1.0) {
  XYTrajectory t;
  for (int i = 1; i <= n; ++i) t.push_back({step * i + dx, dy, true});
  return t;
}

PredictionSet set_of(std::vector<XYTrajectory> modes) {
  PredictionSet p;
  p.scenario_id = "m";
  p.scores.assign(modes.size(), 0.0);
  p.trajectories = std::move(modes);
  return p;
}

// Brute-force displacement errors over jointly valid steps.
std::pair<double, double> brute_ade_fde(const XYTrajectory& gt, const XYTrajectory& pr) {
  double sum = 0.0;
  int n = 0;
  double last = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t t = 0; t < gt.size(); ++t) {
    if (!gt[t].valid || !pr[t].valid) continue;
    const double d = std::sqrt((gt[t].x - pr[t].x) * (gt[t].x - pr[t].x) +
                               (gt[t].y - pr[t].y) * (gt[t].y - pr[t].y));
    sum += d;
    ++n;
    last = d;
  }
  return {sum / n, last};
}

GmmTrajectory gmm_from(const std::vector<XYTrajectory>& modes, double sx = 1.0, double sy = 1.0) {
  GmmTrajectory g;
  for (const auto& m : modes) {
    std::vector<GaussianStep> steps;
    for (const auto& p : m) steps.push_back({p.x, p.y, sx, sy});
    g.modes.push_back(steps);
  }
  return g;
}

synth::SynthTrajectory gt_of(synth::SynthKind kind, synth::TurnSide side = synth::TurnSide::kLeft) {
  synth::SynthSpec spec;
  spec.kind = kind;
  spec.side = side;
  if (kind == synth::SynthKind::kUTurn) {
    spec.radius = 5.0;
    spec.angle_deg = 180.0;
    spec.lateral_offset = 12.0;
    spec.v0 = spec.v_mid = spec.v1 = 6.0;
  }
  return synth::gen_trajectory(spec, kH);
}

}  // namespace

TEST_SUITE("ifr") {
  TEST_CASE("controlled match counts") {
    for (auto kind : {synth::SynthKind::kArc, synth::SynthKind::kStraight, synth::SynthKind::kUTurn}) {
      const auto gt = gt_of(kind);
      const auto instructed = gt.expected.direction;
      for (int m = 0; m <= 6; ++m) {
        const auto p = synth::gen_prediction_set(gt.track, gt.expected.fine, kH, m, 6);
        const auto r = ifr_scenario(instructed, p.set, kH.dt);
        CHECK(r.matches == m);
        CHECK(r.modes == 6);
        CHECK(r.value == doctest::Approx(m / 6.0).epsilon(1e-15));
        for (int j = 0; j < 6; ++j) {
          CHECK(classify_prediction(p.set.trajectories[j], p.set.origin, kH.dt) == p.expected[j]);
        }
      }
    }
    const auto gt = gt_of(synth::SynthKind::kArc);
    const auto at = [&](int m) {
      return ifr_scenario(gt.expected.direction,
                          synth::gen_prediction_set(gt.track, gt.expected.fine, kH, m, 6).set, kH.dt)
          .value;
    };
    CHECK(std::abs(at(6) * 100 - 100.0) < 0.01);
    CHECK(std::abs(at(2) * 100 - 33.33) < 0.01);
    CHECK(std::abs(at(1) * 100 - 16.67) < 0.01);
  }

  TEST_CASE("unclassifiable modes count as misses") {
    auto p = set_of({line(0, 0), line(0, 0)});
    for (auto& pt : p.trajectories[1]) pt.valid = false;
    p.trajectories[1][0].valid = true;
    const auto r = ifr_scenario(DirectionLabel::kStraight, p, kH.dt);
    CHECK(r.matches == 1);
    CHECK(r.unclassifiable == 1);
    CHECK(r.value == 0.5);
    CHECK_THROWS_AS(classify_prediction(p.trajectories[1], std::nullopt, kH.dt),
                    UnclassifiableTrajectory);
  }

  TEST_CASE("rigid motion of predictions leaves IFR unchanged") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (const auto& c : synth::gen_suite("direction", 60, 3)) {
      const auto& track = c.scenario.focal();
      const auto p = synth::gen_prediction_set(track, c.expected.fine, kH, 3, 6);
      const double base = ifr_scenario(c.expected.direction, p.set, kH.dt).value;
      CHECK(base == doctest::Approx(0.5));
      const double phi = u(rng), tx = 40 * u(rng), ty = 40 * u(rng);
      auto moved = p.set;
      const double cs = std::cos(phi), sn = std::sin(phi);
      for (auto& m : moved.trajectories) {
        for (auto& q : m) q = {cs * q.x - sn * q.y + tx, sn * q.x + cs * q.y + ty, q.valid};
      }
      auto& o = *moved.origin;
      const double ox = o.x, oy = o.y;
      o.x = cs * ox - sn * oy + tx;
      o.y = sn * ox + cs * oy + ty;
      o.heading = wrap_angle(o.heading + phi);
      CHECK(ifr_scenario(c.expected.direction, moved, kH.dt).value == base);
    }
  }

  TEST_CASE("macro and micro") {
    std::vector<IfrRow> rows;
    for (int i = 0; i < 9; ++i) rows.push_back({DirectionLabel::kStraight, 1.0});
    rows.push_back({DirectionLabel::kLeft, 0.0});
    const auto m = ifr_macro(rows);
    CHECK(m.macro == 0.5);
    CHECK(m.micro == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(m.per_class.at(DirectionLabel::kStraight) == 1.0);
    CHECK(m.per_class.at(DirectionLabel::kLeft) == 0.0);
    CHECK(m.absent == std::vector{DirectionLabel::kStationary, DirectionLabel::kRight,
                                  DirectionLabel::kLeftUTurn});

    const std::vector<IfrRow> single{{DirectionLabel::kRight, 0.5}, {DirectionLabel::kRight, 1.0 / 6}};
    const auto s = ifr_macro(single);
    CHECK(s.macro == s.micro);

    const std::vector<IfrRow> all{{DirectionLabel::kRight, 1.0}, {DirectionLabel::kLeft, 1.0}};
    CHECK(ifr_macro(all).macro == 1.0);
    CHECK_THROWS_AS(ifr_macro(std::span<const IfrRow>{}), std::invalid_argument);
  }

  TEST_CASE("class-uniform corpus has macro equal to micro") {
    std::mt19937_64 rng(1);
    std::vector<IfrRow> rows;
    for (int k = 0; k < 10; ++k) {
      for (auto d : kAllDirections) rows.push_back({d, static_cast<double>(rng() % 7) / 6.0});
    }
    const auto m = ifr_macro(rows);
    CHECK(std::abs(m.macro - m.micro) < 1e-15);
  }
}

TEST_SUITE("displacement") {
  TEST_CASE("examples") {
    const auto gt = line(0, 0);
    const auto same = set_of({gt});
    CHECK(min_ade(gt, same) == 0.0);
    CHECK(min_fde(gt, same) == 0.0);
    const auto shifted = set_of({line(1, 0)});
    CHECK(min_ade(gt, shifted) == doctest::Approx(1.0));
    CHECK(min_fde(gt, shifted) == doctest::Approx(1.0));
    const auto two = set_of({line(0, 2), line(0, 0.5)});
    CHECK(min_ade(gt, two) == doctest::Approx(0.5));
    CHECK(min_fde(gt, two) == doctest::Approx(0.5));
  }

  TEST_CASE("brute force on random cases") {
    std::mt19937_64 rng(100);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    std::bernoulli_distribution drop(0.15);
    for (int c = 0; c < 100; ++c) {
      const int n = 20 + c % 61;
      XYTrajectory gt;
      for (int t = 0; t < n; ++t) gt.push_back({u(rng), u(rng), !drop(rng)});
      gt[0].valid = true;
      std::vector<XYTrajectory> modes;
      for (int m = 0; m < 1 + c % 6; ++m) {
        XYTrajectory pr;
        for (int t = 0; t < n; ++t) pr.push_back({u(rng), u(rng), t == 0 || !drop(rng)});
        modes.push_back(pr);
      }
      double best_a = 1e300, best_f = 1e300;
      for (const auto& m : modes) {
        const auto [a, f] = brute_ade_fde(gt, m);
        CHECK(std::abs(ade(gt, m) - a) < 1e-9);
        CHECK(std::abs(fde(gt, m) - f) < 1e-9);
        best_a = std::min(best_a, a);
        best_f = std::min(best_f, f);
      }
      auto p = set_of(modes);
      const double ma = min_ade(gt, p), mf = min_fde(gt, p);
      CHECK(std::abs(ma - best_a) < 1e-9);
      CHECK(std::abs(mf - best_f) < 1e-9);
      // Adding a mode never makes things worse.
      p.trajectories.push_back(gt);
      p.scores.push_back(0.0);
      CHECK(min_ade(gt, p) <= ma);
      CHECK(min_fde(gt, p) <= mf);
    }
  }

  TEST_CASE("overlap and shape errors") {
    auto gt = line(0, 0, 5);
    auto pr = line(0, 0, 5);
    for (int t = 0; t < 5; ++t) (t % 2 ? gt : pr)[t].valid = false;
    CHECK_THROWS_AS(ade(gt, pr), NoValidOverlap);
    CHECK_THROWS_AS(fde(gt, pr), NoValidOverlap);
    CHECK_THROWS_AS(ade(line(0, 0, 5), line(0, 0, 4)), SchemaError);
    PredictionSet empty;
    CHECK_THROWS_AS(empty.validate(), SchemaError);
  }

  TEST_CASE("final error uses the last jointly valid step") {
    auto gt = line(0, 0, 4);
    auto pr = line(0, 3, 4);
    pr[3] = {100, 100, false};
    pr[2].y = 2.0;
    CHECK(fde(gt, pr) == doctest::Approx(2.0));
  }
}

TEST_SUITE("accuracy") {
  TEST_CASE("detection") {
    const std::vector<DetectionSample> gt_accept(4, {Decision::kAccept, FeasTag::kGT});
    CHECK(detection_accuracy(gt_accept).gt.accuracy == 1.0);
    const std::vector<DetectionSample> if_accept(3, {Decision::kAccept, FeasTag::kIF});
    CHECK(detection_accuracy(if_accept).infeasible.accuracy == 0.0);
    const std::vector<DetectionSample> mixed{{Decision::kReject, FeasTag::kIF},
                                             {Decision::kReject, FeasTag::kIF},
                                             {Decision::kReject, FeasTag::kIF},
                                             {Decision::kAccept, FeasTag::kIF},
                                             {Decision::kReject, FeasTag::kF}};
    const auto a = detection_accuracy(mixed);
    CHECK(a.infeasible.accuracy == 0.75);
    CHECK(a.infeasible.correct == 3);
    CHECK(a.f.accuracy == 0.0);
    CHECK_FALSE(a.gt.accuracy.has_value());
  }

  TEST_CASE("safety") {
    const std::vector<SafetySample> safe_accept(5, {Decision::kAccept, Safety::kSafe, true});
    CHECK(safety_accuracy(safe_accept).safe_with_context.accuracy == 1.0);
    const std::vector<SafetySample> unsafe_accept(2, {Decision::kAccept, Safety::kUnsafe, false});
    CHECK(safety_accuracy(unsafe_accept).unsafe_without_context.accuracy == 0.0);
    const std::vector<SafetySample> mixed{{Decision::kReject, Safety::kUnsafe, true},
                                          {Decision::kReject, Safety::kUnsafe, true},
                                          {Decision::kAccept, Safety::kUnsafe, true},
                                          {Decision::kReject, Safety::kUnsafe, true},
                                          {Decision::kAccept, Safety::kSafe, false}};
    const auto a = safety_accuracy(mixed);
    CHECK(a.unsafe_with_context.accuracy == 0.75);
    CHECK(a.safe_without_context.accuracy == 1.0);
    CHECK_FALSE(a.safe_with_context.accuracy.has_value());
  }
}

TEST_SUITE("losses") {
  const std::vector<int> sel{29, 49, 79};

  TEST_CASE("gmm nll closed forms") {
    const auto gt = line(0, 0);
    CHECK(gmm_nll(gmm_from({gt}), gt, 0, sel) == 0.0);
    CHECK(std::abs(gmm_nll(gmm_from({line(1, 0)}), gt, 0, sel) - 3 * 0.5) < 1e-12);
    CHECK(std::abs(gmm_nll(gmm_from({gt}, std::exp(1.0), 1.0), gt, 0, sel) - 3 * 1.0) < 1e-12);
    const std::vector<int> one{10};
    CHECK(std::abs(gmm_nll(gmm_from({line(1, 0)}), gt, 0, one) - 0.5) < 1e-12);
  }

  TEST_CASE("gmm nll errors and invalid steps") {
    const auto gt = line(0, 0);
    CHECK_THROWS_AS(gmm_nll(gmm_from({gt}, 0.0), gt, 0, sel), NonPositiveSigma);
    CHECK_THROWS_AS(gmm_nll(gmm_from({gt}), gt, 1, sel), std::out_of_range);
    const std::vector<int> beyond{80};
    CHECK_THROWS_AS(gmm_nll(gmm_from({gt}), gt, 0, beyond), std::out_of_range);
    auto holey = gt;
    holey[49].valid = false;
    CHECK(std::abs(gmm_nll(gmm_from({line(1, 0)}), holey, 0, sel) - 2 * 0.5) < 1e-12);
  }

  TEST_CASE("nll is minimized at the ground truth") {
    const auto gt = line(0, 0);
    for (double sx : {0.5, 1.0, 3.0}) {
      const double at = gmm_nll(gmm_from({gt}, sx, 2.0), gt, 0, sel);
      for (double dx = -1.0; dx <= 1.0; dx += 0.125) {
        for (double dy = -1.0; dy <= 1.0; dy += 0.125) {
          if (dx == 0.0 && dy == 0.0) continue;
          CHECK(gmm_nll(gmm_from({line(dx, dy)}, sx, 2.0), gt, 0, sel) > at);
        }
      }
      // Central difference of the gradient vanishes at mu = gt.
      const double h = 1e-5;
      const double g = (gmm_nll(gmm_from({line(h, 0)}, sx, 2.0), gt, 0, sel) -
                        gmm_nll(gmm_from({line(-h, 0)}, sx, 2.0), gt, 0, sel)) / (2 * h);
      CHECK(std::abs(g) < 1e-6);
    }
  }

  TEST_CASE("best mode") {
    const auto gt = line(0, 0);
    CHECK(best_mode(gmm_from({gt, gt, gt}), gt, sel) == 0);
    CHECK(best_mode(gmm_from({line(0, 4), gt, line(0, 2)}), gt, sel) == 1);
    CHECK(best_mode(gmm_from({line(0, 3), line(0, 1)}), gt, sel) == 1);
    CHECK(best_mode(set_of({line(0, 3), line(0, 1)}), gt, sel) == 1);
  }

  TEST_CASE("best mode survives rescaling of every distance") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    const auto gt = line(0, 0);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<XYTrajectory> modes;
      for (int m = 0; m < 6; ++m) modes.push_back(line(u(rng), u(rng)));
      const auto base = best_mode(gmm_from(modes), gt, sel);
      for (double k : {0.1, 2.0, 37.0}) {
        auto scaled = modes;
        for (auto& mode : scaled) {
          for (std::size_t t = 0; t < mode.size(); ++t) {
            mode[t].x = gt[t].x + k * (mode[t].x - gt[t].x);
            mode[t].y = gt[t].y + k * (mode[t].y - gt[t].y);
          }
        }
        CHECK(best_mode(gmm_from(scaled), gt, sel) == base);
      }
    }
  }

  TEST_CASE("cross-entropy") {
    const std::vector<double> uniform(6, 0.3);
    CHECK(std::abs(score_loss(uniform, 2) - std::log(6.0)) < 1e-12);
    const std::vector<double> uniform_p(6, 1.0 / 6);
    CHECK(std::abs(score_loss(uniform_p, 4, ScoreKind::kProbabilities) - std::log(6.0)) < 1e-12);
    const std::vector<double> onehot{0, 0, 1, 0, 0, 0};
    CHECK(score_loss(onehot, 2, ScoreKind::kProbabilities) == 0.0);
    const std::vector<double> logits{1.5, -2.0, 0.25, 700.0, 3.0};
    double z = 0.0;
    for (double s : logits) z += std::exp(s - 700.0);
    CHECK(std::abs(score_loss(logits, 0) - (700.0 - 1.5 + std::log(z))) < 1e-9);
    CHECK(std::isfinite(score_loss(logits, 1)));
  }

  TEST_CASE("combined") {
    const double nll = 1.5, ce = std::log(6.0);
    CHECK(combined_loss(nll, ce) == nll + ce);
    CHECK(combined_loss(nll, ce, LossSign::kPseudocodeLiteral) == nll - ce);
  }
}

TEST_SUITE("summation") {
  TEST_CASE("pairwise sum") {
    std::vector<double> v;
    for (int i = 1; i <= 1000; ++i) v.push_back(i);
    CHECK(pairwise_sum(v) == 500500.0);
    CHECK(pairwise_mean(v) == 500.5);
    CHECK(pairwise_sum(std::span<const double>{}) == 0.0);
    // Ten thousand copies of 0.1 stay close to 1000.
    const std::vector<double> tenth(10000, 0.1);
    CHECK(std::abs(pairwise_sum(tenth) - 1000.0) < 1e-10);
  }
}
