#pragma once

#include <stdexcept>
#include <string>

namespace spinmf {

/// Failure categories. The CLI maps each one onto a stable exit code.
enum class ErrorKind {
  Argument,     // bad value or precondition violated by the caller
  Unsupported,  // valid values that cannot be combined (engineered ring)
  Numeric,      // eigensolver or other numerical breakdown
  Degenerate,   // input carries too little scale information to analyse
  Io,
  Parse,
  SchemaVersion,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Pipeline stage that raised the error, empty outside the pipeline.
  const std::string& stage() const noexcept { return stage_; }

  /// Copy of this error tagged with a pipeline stage.
  Error with_stage(std::string stage) const;

 private:
  ErrorKind kind_;
  std::string stage_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace spinmf
