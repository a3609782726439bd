#include "funk/error.hpp"

namespace funk {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DegenerateProjection: return "DegenerateProjection";
    case ErrorKind::TooFewNodes: return "TooFewNodes";
    case ErrorKind::InvalidInterval: return "InvalidInterval";
    case ErrorKind::InvalidExponent: return "InvalidExponent";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NonuniformGrid: return "NonuniformGrid";
    case ErrorKind::InsufficientProfile: return "InsufficientProfile";
    case ErrorKind::UnknownPhantom: return "UnknownPhantom";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace funk
