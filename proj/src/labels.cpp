#include "instructkit/labels.hpp"

namespace instructkit {

namespace {

constexpr std::array<std::string_view, kFineDirectionCount> kFineNames{
    "stationary", "straight", "straight_veer_left", "straight_veer_right",
    "left_turn",  "right_turn", "left_u_turn",      "right_u_turn"};

constexpr std::array<std::string_view, kDirectionCount> kDirectionNames{
    "stationary", "straight", "right", "left", "left_u_turn"};
constexpr std::array<std::string_view, kDirectionCount> kDirectionWords{
    "stationary", "straight", "right", "left", "left U-turn"};

constexpr std::array<std::string_view, kSpeedCategoryCount> kSpeedNames{
    "very_slow", "slow", "moderate", "fast", "very_fast"};
constexpr std::array<std::string_view, kSpeedCategoryCount> kSpeedWords{
    "very slow", "slow", "moderate", "fast", "very fast"};

constexpr std::array<std::string_view, kAccelCategoryCount> kAccelNames{
    "constant",     "mild_accel",     "moderate_accel",   "aggressive_accel", "extreme_accel",
    "mild_decel",   "moderate_decel", "aggressive_decel", "extreme_decel"};
constexpr std::array<std::string_view, kAccelCategoryCount> kAccelWords{
    "constant velocity",     "mild acceleration",     "moderate acceleration",
    "aggressive acceleration", "extreme acceleration", "mild deceleration",
    "moderate deceleration", "aggressive deceleration", "extreme deceleration"};

constexpr std::array<std::string_view, kBehaviorCount> kBehaviorNames{
    "not_moving",   "stopping",    "waiting_then_moving",   "slowing_down",
    "speeding_up",  "slowing_then_speeding", "speeding_then_slowing", "maintaining_speed"};
constexpr std::array<std::string_view, kBehaviorCount> kBehaviorPhrases{
    "Remain stationary",
    "Come to a stop",
    "Wait, then start moving",
    "Slow down",
    "Speed up",
    "Slow down, then speed up",
    "Speed up, then slow down",
    "Maintain the current speed"};

constexpr std::array<std::string_view, 3> kFeasNames{"GT", "F", "IF"};
constexpr std::array<std::string_view, 2> kSafetyNames{"safe", "unsafe"};
constexpr std::array<std::string_view, 2> kDecisionNames{"Accept", "Reject"};

template <class E, std::size_t N>
std::optional<E> lookup(const std::array<std::string_view, N>& names, std::string_view s) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(FineDirection v) noexcept { return kFineNames[index_of(v)]; }
std::string_view to_string(DirectionLabel v) noexcept { return kDirectionNames[index_of(v)]; }
std::string_view to_string(SpeedCategory v) noexcept { return kSpeedNames[index_of(v)]; }
std::string_view to_string(AccelCategory v) noexcept { return kAccelNames[index_of(v)]; }
std::string_view to_string(BehaviorLabel v) noexcept { return kBehaviorNames[index_of(v)]; }
std::string_view to_string(FeasTag v) noexcept { return kFeasNames[index_of(v)]; }
std::string_view to_string(Safety v) noexcept { return kSafetyNames[index_of(v)]; }
std::string_view to_string(Decision v) noexcept { return kDecisionNames[index_of(v)]; }

std::optional<FineDirection> fine_direction_from_string(std::string_view s) noexcept {
  return lookup<FineDirection>(kFineNames, s);
}
std::optional<DirectionLabel> direction_from_string(std::string_view s) noexcept {
  return lookup<DirectionLabel>(kDirectionNames, s);
}
std::optional<SpeedCategory> speed_category_from_string(std::string_view s) noexcept {
  return lookup<SpeedCategory>(kSpeedNames, s);
}
std::optional<AccelCategory> accel_category_from_string(std::string_view s) noexcept {
  return lookup<AccelCategory>(kAccelNames, s);
}
std::optional<BehaviorLabel> behavior_from_string(std::string_view s) noexcept {
  return lookup<BehaviorLabel>(kBehaviorNames, s);
}
std::optional<FeasTag> feas_tag_from_string(std::string_view s) noexcept {
  return lookup<FeasTag>(kFeasNames, s);
}
std::optional<Safety> safety_from_string(std::string_view s) noexcept {
  return lookup<Safety>(kSafetyNames, s);
}
std::optional<Decision> decision_from_string(std::string_view s) noexcept {
  return lookup<Decision>(kDecisionNames, s);
}

std::string_view display_name(DirectionLabel v) noexcept { return kDirectionWords[index_of(v)]; }
std::string_view display_name(SpeedCategory v) noexcept { return kSpeedWords[index_of(v)]; }
std::string_view display_name(AccelCategory v) noexcept { return kAccelWords[index_of(v)]; }

std::string_view behavior_phrase(BehaviorLabel v) noexcept { return kBehaviorPhrases[index_of(v)]; }

FineDirection mirror(FineDirection v) noexcept {
  switch (v) {
    case FineDirection::kStraightVeerLeft: return FineDirection::kStraightVeerRight;
    case FineDirection::kStraightVeerRight: return FineDirection::kStraightVeerLeft;
    case FineDirection::kLeftTurn: return FineDirection::kRightTurn;
    case FineDirection::kRightTurn: return FineDirection::kLeftTurn;
    case FineDirection::kLeftUTurn: return FineDirection::kRightUTurn;
    case FineDirection::kRightUTurn: return FineDirection::kLeftUTurn;
    default: return v;
  }
}

}  // namespace instructkit
