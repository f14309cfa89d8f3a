#include "instructkit/errors.hpp"

namespace instructkit {

std::string_view error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kSchema: return "SchemaError";
    case ErrorKind::kReference: return "ReferenceError";
    case ErrorKind::kGeometry: return "GeometryError";
    case ErrorKind::kInvalidAnchor: return "InvalidAnchor";
    case ErrorKind::kInsufficientPoints: return "InsufficientPoints";
    case ErrorKind::kNegativeSpeed: return "NegativeSpeed";
    case ErrorKind::kCap: return "CapError";
    case ErrorKind::kCoverage: return "CoverageError";
    case ErrorKind::kUnknownScenarioType: return "UnknownScenarioType";
    case ErrorKind::kEmptyClass: return "EmptyClass";
    case ErrorKind::kNoValidOverlap: return "NoValidOverlap";
    case ErrorKind::kNonPositiveSigma: return "NonPositiveSigma";
    case ErrorKind::kInvalidSpec: return "InvalidSpec";
    case ErrorKind::kUnclassifiableTrajectory: return "UnclassifiableTrajectory";
    case ErrorKind::kNotAVehicle: return "NotAVehicle";
    case ErrorKind::kConfig: return "ConfigError";
  }
  return "Error";
}

}  // namespace instructkit
