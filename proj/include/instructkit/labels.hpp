#pragma once

// Categorical labels shared across modules, with their JSON tokens and the
// words used in rendered instruction/caption text.

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace instructkit {

enum class FineDirection {
  kStationary,
  kStraight,
  kStraightVeerLeft,
  kStraightVeerRight,
  kLeftTurn,
  kRightTurn,
  kLeftUTurn,
  kRightUTurn,
};
inline constexpr std::size_t kFineDirectionCount = 8;

/// The five coarse direction buckets, in the order of the dataset statistics table.
enum class DirectionLabel { kStationary, kStraight, kRight, kLeft, kLeftUTurn };
inline constexpr std::size_t kDirectionCount = 5;
inline constexpr std::array<DirectionLabel, kDirectionCount> kAllDirections{
    DirectionLabel::kStationary, DirectionLabel::kStraight, DirectionLabel::kRight,
    DirectionLabel::kLeft, DirectionLabel::kLeftUTurn};

enum class SpeedCategory { kVerySlow, kSlow, kModerate, kFast, kVeryFast };
inline constexpr std::size_t kSpeedCategoryCount = 5;

enum class AccelCategory {
  kConstant,
  kMildAccel,
  kModerateAccel,
  kAggressiveAccel,
  kExtremeAccel,
  kMildDecel,
  kModerateDecel,
  kAggressiveDecel,
  kExtremeDecel,
};
inline constexpr std::size_t kAccelCategoryCount = 9;

enum class BehaviorLabel {
  kNotMoving,
  kStopping,
  kWaitingThenMoving,
  kSlowingDown,
  kSpeedingUp,
  kSlowingThenSpeeding,
  kSpeedingThenSlowing,
  kMaintainingSpeed,
};
inline constexpr std::size_t kBehaviorCount = 8;
inline constexpr std::array<BehaviorLabel, kBehaviorCount> kAllBehaviors{
    BehaviorLabel::kNotMoving,          BehaviorLabel::kStopping,
    BehaviorLabel::kWaitingThenMoving,  BehaviorLabel::kSlowingDown,
    BehaviorLabel::kSpeedingUp,         BehaviorLabel::kSlowingThenSpeeding,
    BehaviorLabel::kSpeedingThenSlowing, BehaviorLabel::kMaintainingSpeed};

enum class FeasTag { kGT, kF, kIF };
enum class Safety { kSafe, kUnsafe };
enum class Decision { kAccept, kReject };

// JSON tokens (snake_case, except the tags which keep their short forms).
std::string_view to_string(FineDirection v) noexcept;
std::string_view to_string(DirectionLabel v) noexcept;
std::string_view to_string(SpeedCategory v) noexcept;
std::string_view to_string(AccelCategory v) noexcept;
std::string_view to_string(BehaviorLabel v) noexcept;
std::string_view to_string(FeasTag v) noexcept;
std::string_view to_string(Safety v) noexcept;
std::string_view to_string(Decision v) noexcept;

std::optional<FineDirection> fine_direction_from_string(std::string_view s) noexcept;
std::optional<DirectionLabel> direction_from_string(std::string_view s) noexcept;
std::optional<SpeedCategory> speed_category_from_string(std::string_view s) noexcept;
std::optional<AccelCategory> accel_category_from_string(std::string_view s) noexcept;
std::optional<BehaviorLabel> behavior_from_string(std::string_view s) noexcept;
std::optional<FeasTag> feas_tag_from_string(std::string_view s) noexcept;
std::optional<Safety> safety_from_string(std::string_view s) noexcept;
std::optional<Decision> decision_from_string(std::string_view s) noexcept;

// Words used in rendered text ("left U-turn", "very slow", "constant velocity").
std::string_view display_name(DirectionLabel v) noexcept;
std::string_view display_name(SpeedCategory v) noexcept;
std::string_view display_name(AccelCategory v) noexcept;

/// Imperative phrase for a behavior, e.g. "Slow down".
std::string_view behavior_phrase(BehaviorLabel v) noexcept;

/// Left/right mirror image of a fine direction.
FineDirection mirror(FineDirection v) noexcept;

template <class E>
constexpr std::size_t index_of(E v) noexcept {
  return static_cast<std::size_t>(v);
}

}  // namespace instructkit
