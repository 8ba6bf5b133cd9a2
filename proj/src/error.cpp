#include "srcwb/error.hpp"

namespace srcwb {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::NotFound: return "not-found";
    case ErrorKind::Parse: return "parse-error";
    case ErrorKind::Lex: return "lex-error";
    case ErrorKind::EmptyProject: return "empty-project";
    case ErrorKind::EmptyTask: return "empty-task";
    case ErrorKind::EmptyDistribution: return "empty-distribution";
    case ErrorKind::MissingArtifact: return "missing-artifact";
    case ErrorKind::Duplicate: return "duplicate";
    case ErrorKind::Io: return "io-error";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

PositionedError::PositionedError(ErrorKind kind, int line, int col,
                                 const std::string& message)
    : Error(kind, std::to_string(line) + ":" + std::to_string(col) + ": " + message),
      line_(line),
      col_(col),
      detail_(message) {}

}  // namespace srcwb
