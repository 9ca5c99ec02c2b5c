#include "physbc/error.hpp"

namespace physbc {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidState: return "invalid-state";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kCapacity: return "capacity";
    case ErrorKind::kNoCover: return "no-cover";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kModelMismatch: return "model-mismatch";
    case ErrorKind::kRegionViolation: return "region-violation";
    case ErrorKind::kDegenerateData: return "degenerate-data";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kInsufficientSamples: return "insufficient-samples";
    case ErrorKind::kGeometrySaturation: return "geometry-saturation";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kFile: return "file";
    case ErrorKind::kInternal: return "internal";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + message),
      kind_(kind),
      message_(message) {}

void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace physbc
