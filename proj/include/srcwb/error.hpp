#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace srcwb {

enum class ErrorKind {
  InvalidArgument,
  NotFound,
  Parse,
  Lex,
  EmptyProject,
  EmptyTask,
  EmptyDistribution,
  MissingArtifact,
  Duplicate,
  Io,
  Internal,
};

std::string_view to_string(ErrorKind kind);

/// Exception carrying a machine-readable kind. The CLI maps kinds onto exit
/// codes, library callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Error with a 1-based source position (lexer, parser, CSV reader).
class PositionedError : public Error {
 public:
  PositionedError(ErrorKind kind, int line, int col, const std::string& message);

  int line() const noexcept { return line_; }
  int col() const noexcept { return col_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  int line_;
  int col_;
  std::string detail_;
};

}  // namespace srcwb
