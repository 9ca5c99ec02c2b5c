#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace physbc {

enum class ErrorKind {
  kInvalidState,
  kInvalidArgument,
  kCapacity,
  kNoCover,
  kParse,
  kModelMismatch,
  kRegionViolation,
  kDegenerateData,
  kDomain,
  kInsufficientSamples,
  kGeometrySaturation,
  kValidation,
  kFile,
  kInternal,
};

std::string_view to_string(ErrorKind kind);

/// Exception type thrown by every physbc module. The kind lets callers
/// (and the CLI) distinguish recoverable data problems from bugs.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  /// what() without the "<kind> error: " prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace physbc
