#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace instructkit {

enum class ErrorKind {
  kSchema,
  kReference,
  kGeometry,
  kInvalidAnchor,
  kInsufficientPoints,
  kNegativeSpeed,
  kCap,
  kCoverage,
  kUnknownScenarioType,
  kEmptyClass,
  kNoValidOverlap,
  kNonPositiveSigma,
  kInvalidSpec,
  kUnclassifiableTrajectory,
  kNotAVehicle,
  kConfig,
};

/// Stable name used in CLI diagnostics, e.g. "SchemaError".
std::string_view error_kind_name(ErrorKind kind) noexcept;

/// Base of every error the toolkit raises on bad input.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

template <ErrorKind K>
class KindError : public Error {
 public:
  explicit KindError(const std::string& message) : Error(K, message) {}
};

using SchemaError = KindError<ErrorKind::kSchema>;
using ReferenceError = KindError<ErrorKind::kReference>;
using GeometryError = KindError<ErrorKind::kGeometry>;
using InvalidAnchor = KindError<ErrorKind::kInvalidAnchor>;
using InsufficientPoints = KindError<ErrorKind::kInsufficientPoints>;
using NegativeSpeed = KindError<ErrorKind::kNegativeSpeed>;
using CapError = KindError<ErrorKind::kCap>;
using CoverageError = KindError<ErrorKind::kCoverage>;
using UnknownScenarioType = KindError<ErrorKind::kUnknownScenarioType>;
using EmptyClass = KindError<ErrorKind::kEmptyClass>;
using NoValidOverlap = KindError<ErrorKind::kNoValidOverlap>;
using NonPositiveSigma = KindError<ErrorKind::kNonPositiveSigma>;
using InvalidSpec = KindError<ErrorKind::kInvalidSpec>;
using UnclassifiableTrajectory = KindError<ErrorKind::kUnclassifiableTrajectory>;
using NotAVehicle = KindError<ErrorKind::kNotAVehicle>;
using ConfigError = KindError<ErrorKind::kConfig>;

}  // namespace instructkit
