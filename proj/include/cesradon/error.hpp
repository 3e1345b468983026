#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cesradon {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  NonConvergent,
  UnboundedRegion,
  StripViolation,
  PoleError,
  MethodUnavailable,
  OutOfRange,
  BoundaryLeak,
  TailDivergence,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Library-wide exception. The kind drives the CLI exit-code mapping.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace cesradon
