#include <cmath>
#include <random>

#include "doctest.h"

#include "instructkit/errors.hpp"
#include "instructkit/motion_attributes.hpp"
#include "instructkit/synth.hpp"
#include "support.hpp"

using namespace instructkit;

namespace {

const DirectionThresholds kTh{};

FineDirection classify_xy(const std::vector<std::pair<double, double>>& xy) {
  const auto pts = test::points_from_xy(xy, 0.1);
  return classify_direction_fine(pts, kTh);
}

// Circle of radius r starting at the origin heading +x; positive sweep turns left.
std::vector<std::pair<double, double>> arc(double r, double sweep_rad, int n) {
  return test::sample_curve(n + 1, [&](int i) {
    const double a = sweep_rad * i / n;
    const double s = a >= 0 ? 1.0 : -1.0;
    return std::pair{r * std::sin(std::abs(a)), s * r * (1 - std::cos(a))};
  });
}

// Independent table lookups used as oracles for the threshold scans.
SpeedCategory speed_oracle(double v) {
  if (v < 20) return SpeedCategory::kVerySlow;
  if (v < 40) return SpeedCategory::kSlow;
  if (v < 90) return SpeedCategory::kModerate;
  if (v < 120) return SpeedCategory::kFast;
  return SpeedCategory::kVeryFast;
}

AccelCategory accel_oracle(double dv) {
  const double m = std::abs(dv);
  if (m < 6) return AccelCategory::kConstant;
  const int band = m < 25 ? 0 : m < 46 ? 1 : m < 65 ? 2 : 3;
  const AccelCategory up[] = {AccelCategory::kMildAccel, AccelCategory::kModerateAccel,
                              AccelCategory::kAggressiveAccel, AccelCategory::kExtremeAccel};
  const AccelCategory down[] = {AccelCategory::kMildDecel, AccelCategory::kModerateDecel,
                                AccelCategory::kAggressiveDecel, AccelCategory::kExtremeDecel};
  return dv > 0 ? up[band] : down[band];
}

}  // namespace

TEST_SUITE("direction") {
  TEST_CASE("zero motion is stationary") {
    CHECK(classify_xy(std::vector<std::pair<double, double>>(20, {3.0, 4.0})) ==
          FineDirection::kStationary);
  }

  TEST_CASE("quarter circle, radius 20, turns left") {
    CHECK(classify_xy(arc(20.0, kPi / 2, 40)) == FineDirection::kLeftTurn);
    CHECK(classify_xy(arc(20.0, -kPi / 2, 40)) == FineDirection::kRightTurn);
  }

  TEST_CASE("straight 40 m line") {
    CHECK(classify_xy(test::sample_curve(41, [](int i) { return std::pair{1.0 * i, 0.0}; })) ==
          FineDirection::kStraight);
  }

  TEST_CASE("170 degree arc of radius 8") {
    const double sweep = deg_to_rad(170);
    // Analytic endpoint: lat = r (1 - cos 170deg) > 0, on the turning side.
    const double lat = 8.0 * (1 - std::cos(sweep));
    REQUIRE(lat > 0);
    CHECK(classify_xy(arc(8.0, sweep, 60)) == FineDirection::kLeftTurn);
  }

  TEST_CASE("u-turn needs an opposite-side lateral shift") {
    // Swing right on a radius-12 quarter circle, loop left 260 degrees on
    // radius 3, then run 10 m straight. Net heading change +170 degrees.
    auto build = [](double swing_r) {
      std::vector<std::pair<double, double>> xy{{0.0, 0.0}};
      for (int i = 1; i <= 40; ++i) {
        const double a = (kPi / 2) * i / 40;
        xy.push_back({swing_r * std::sin(a), -swing_r * (1 - std::cos(a))});
      }
      const double cx = swing_r + 3.0, cy = -swing_r;
      for (int i = 1; i <= 60; ++i) {
        const double a = kPi + deg_to_rad(260) * i / 60;
        xy.push_back({cx + 3.0 * std::cos(a), cy + 3.0 * std::sin(a)});
      }
      const double h = deg_to_rad(170);
      const auto end = xy.back();
      for (int i = 1; i <= 20; ++i) {
        xy.push_back({end.first + 0.5 * i * std::cos(h), end.second + 0.5 * i * std::sin(h)});
      }
      return xy;
    };
    // Analytic endpoint lat: -r + 3 sin(80 deg) + 10 sin(170 deg).
    const auto lat = [](double r) { return -r + 3 * std::sin(deg_to_rad(80)) + 10 * std::sin(deg_to_rad(170)); };
    REQUIRE(lat(12.0) < -5.0);
    REQUIRE(lat(4.0) > -5.0);
    CHECK(classify_xy(build(12.0)) == FineDirection::kLeftUTurn);
    CHECK(classify_xy(build(4.0)) == FineDirection::kLeftTurn);
  }

  TEST_CASE("displacement rules") {
    const auto deg = [](double d) { return deg_to_rad(d); };
    CHECK(classify_displacement(0.0, 0.0, kTh) == FineDirection::kStraight);
    CHECK(classify_displacement(deg(10), 6.0, kTh) == FineDirection::kStraightVeerLeft);
    CHECK(classify_displacement(deg(-10), -6.0, kTh) == FineDirection::kStraightVeerRight);
    CHECK(classify_displacement(deg(10), 5.0, kTh) == FineDirection::kStraight);
    CHECK(classify_displacement(deg(30), 0.0, kTh) == FineDirection::kStraight);
    CHECK(classify_displacement(deg(30.001), 0.0, kTh) == FineDirection::kLeftTurn);
    CHECK(classify_displacement(deg(150), 12.0, kTh) == FineDirection::kLeftTurn);
    CHECK(classify_displacement(deg(150), -4.0, kTh) == FineDirection::kLeftTurn);
    CHECK(classify_displacement(deg(150), -5.0, kTh) == FineDirection::kLeftTurn);
    CHECK(classify_displacement(deg(150), -8.0, kTh) == FineDirection::kLeftUTurn);
    CHECK(classify_displacement(deg(-150), 8.0, kTh) == FineDirection::kRightUTurn);
    CHECK(classify_displacement(deg(-90), -20.0, kTh) == FineDirection::kRightTurn);
  }

  TEST_CASE("fewer than two points") {
    const std::vector<TrajectoryPoint> one{{0, 0, 0, 5, true, 0}};
    CHECK_THROWS_AS(classify_direction_fine(one, kTh), InsufficientPoints);
    AgentTrack t;
    t.agent_id = "a";
    t.points = {{0, 0, 0, 5, true, 0}, {1, 0, 0, 5, false, 1}, {2, 0, 0, 5, false, 2}};
    CHECK_THROWS_AS(classify_direction_fine(t, {0, 2}, kTh), InsufficientPoints);
  }

  TEST_CASE("invalid points inside the window are skipped") {
    auto pts = test::points_from_xy(arc(20.0, kPi / 2, 40), 0.1);
    AgentTrack t;
    t.agent_id = "a";
    t.points = pts;
    for (int i = 5; i < 35; i += 3) t.points[i].valid = false;
    t.points[20].x = 1e6;  // garbage on an invalid step
    t.points[20].valid = false;
    CHECK(classify_direction_fine(t, {0, 40}, kTh) == FineDirection::kLeftTurn);
  }

  TEST_CASE("collapse table") {
    CHECK(collapse_direction(FineDirection::kStraightVeerRight) == DirectionLabel::kStraight);
    CHECK(collapse_direction(FineDirection::kStraightVeerLeft) == DirectionLabel::kStraight);
    CHECK(collapse_direction(FineDirection::kLeftUTurn) == DirectionLabel::kLeftUTurn);
    CHECK(collapse_direction(FineDirection::kRightUTurn) == DirectionLabel::kRight);
    CHECK(collapse_direction(FineDirection::kLeftTurn) == DirectionLabel::kLeft);
    CHECK(collapse_direction(FineDirection::kRightTurn) == DirectionLabel::kRight);
    CHECK(collapse_direction(FineDirection::kStationary) == DirectionLabel::kStationary);
  }
}

TEST_SUITE("direction properties") {
  TEST_CASE("rigid-motion invariance and mirror symmetry on synthetic tracks") {
    const HorizonConfig h;
    const auto cases = synth::gen_suite("direction", 400, 21);
    const auto w = future_window(h);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    std::uniform_real_distribution<double> off(-500.0, 500.0);
    for (const auto& c : cases) {
      const auto& track = c.scenario.focal();
      const auto fine = classify_direction_fine(track, w, kTh);
      REQUIRE(fine == c.expected.fine);
      const auto moved = test::transformed(track, ang(rng), off(rng), off(rng));
      CHECK(classify_direction_fine(moved, w, kTh) == fine);
      const auto flipped = test::mirrored(track, w.start);
      CHECK(classify_direction_fine(flipped, w, kTh) == mirror(fine));
    }
  }
}

TEST_SUITE("speed and acceleration") {
  TEST_CASE("speed table") {
    CHECK(classify_speed(19) == SpeedCategory::kVerySlow);
    CHECK(classify_speed(100) == SpeedCategory::kFast);
    CHECK(classify_speed(20) == SpeedCategory::kSlow);
    CHECK(classify_speed(0) == SpeedCategory::kVerySlow);
    CHECK(classify_speed(120) == SpeedCategory::kVeryFast);
    CHECK_THROWS_AS(classify_speed(-0.1), NegativeSpeed);
  }

  TEST_CASE("acceleration table") {
    CHECK(classify_acceleration(5) == AccelCategory::kConstant);
    CHECK(classify_acceleration(30) == AccelCategory::kModerateAccel);
    CHECK(classify_acceleration(-70) == AccelCategory::kExtremeDecel);
    CHECK(classify_acceleration(6) == AccelCategory::kMildAccel);
    CHECK(classify_acceleration(-6) == AccelCategory::kMildDecel);
    CHECK(classify_acceleration(-5.999) == AccelCategory::kConstant);
    CHECK(classify_acceleration(65) == AccelCategory::kExtremeAccel);
  }

  TEST_CASE("dense scans match the tables") {
    for (int k = 0; k <= 2000; ++k) {
      const double v = k / 10.0;
      CHECK(classify_speed(v) == speed_oracle(v));
    }
    for (int k = -1000; k <= 1000; ++k) {
      const double dv = k / 10.0;
      CHECK(classify_acceleration(dv) == accel_oracle(dv));
    }
  }

  TEST_CASE("bands are contiguous and ordered") {
    // Each category occupies one contiguous run along the scan.
    int changes = 0;
    auto prev = classify_speed(0);
    for (int k = 1; k <= 2000; ++k) {
      const auto cur = classify_speed(k / 10.0);
      if (cur != prev) {
        ++changes;
        CHECK(index_of(cur) == index_of(prev) + 1);
      }
      prev = cur;
    }
    CHECK(changes == 4);
  }
}

TEST_SUITE("two-step") {
  const HorizonConfig h;

  TEST_CASE("constant 36 km/h straight") {
    const auto t = test::track_with_future(
        test::sample_curve(h.t_pred + 1, [](int i) { return std::pair{1.0 * i, 0.0}; }), h);
    const auto ts = classify_two_step(t, h);
    const StepAttributes expect{DirectionLabel::kStraight, SpeedCategory::kSlow,
                                AccelCategory::kConstant};
    CHECK(ts.first == expect);
    CHECK(ts.second == expect);
  }

  TEST_CASE("straight then left") {
    // 40 steps of 1 m, then a 40 m arc of radius 20 (2 rad) to the left.
    auto xy = test::sample_curve(41, [](int i) { return std::pair{1.0 * i, 0.0}; });
    for (int i = 1; i <= 40; ++i) {
      const double a = 2.0 * i / 40;
      xy.push_back({40.0 + 20.0 * std::sin(a), 20.0 * (1 - std::cos(a))});
    }
    const auto t = test::track_with_future(xy, h);
    const auto ts = classify_two_step(t, h);
    CHECK(ts.first.direction == DirectionLabel::kStraight);
    CHECK(ts.second.direction == DirectionLabel::kLeft);
  }

  TEST_CASE("all stationary") {
    const auto t = test::track_with_future(
        std::vector<std::pair<double, double>>(h.t_pred + 1, {1.0, 1.0}), h);
    const auto ts = classify_two_step(t, h);
    CHECK(ts.first.direction == DirectionLabel::kStationary);
    CHECK(ts.second.direction == DirectionLabel::kStationary);
  }

  TEST_CASE("half-window delta-v is rescaled to 8 s") {
    // Linear ramp 0 -> 16 m/s over 8 s: each half gains 8 m/s in 4 s,
    // i.e. 57.6 km/h over 8 s -> aggressive; the full window gains 57.6 km/h too.
    std::vector<TrajectoryPoint> pts;
    for (int i = 0; i <= 80; ++i) {
      const double t = i * 0.1;
      pts.push_back({t * t, 0.0, 0.0, 2.0 * t, true, i});
    }
    CHECK(normalized_delta_v_kmh(pts, 0.1) == doctest::Approx(16 * 3.6));
    std::span<const TrajectoryPoint> half(pts.data(), 41);
    CHECK(normalized_delta_v_kmh(half, 0.1) == doctest::Approx(16 * 3.6));
    CHECK(mean_speed_kmh(half) == doctest::Approx(4.0 * 3.6));
  }

  TEST_CASE("extract matches the synthetic oracle") {
    for (const char* suite : {"default", "direction"}) {
      for (const auto& c : synth::gen_suite(suite, 300, 99)) {
        const auto a = extract_attributes(c.scenario.focal(), c.scenario.horizon);
        CHECK(a.fine == c.expected.fine);
        CHECK(a.direction == c.expected.direction);
        CHECK(a.speed == c.expected.speed);
        CHECK(a.accel == c.expected.accel);
        REQUIRE(c.expected.two_step.has_value());
        CHECK(a.two_step == *c.expected.two_step);
      }
    }
  }
}
