#include "cesradon/error.hpp"

namespace cesradon {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::UnboundedRegion: return "UnboundedRegion";
    case ErrorKind::StripViolation: return "StripViolation";
    case ErrorKind::PoleError: return "PoleError";
    case ErrorKind::MethodUnavailable: return "MethodUnavailable";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::BoundaryLeak: return "BoundaryLeak";
    case ErrorKind::TailDivergence: return "TailDivergence";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace cesradon
