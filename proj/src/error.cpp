#include "spinmf/error.hpp"

namespace spinmf {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Argument: return "argument";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::Io: return "io";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::SchemaVersion: return "schema-version";
  }
  return "unknown";
}

Error Error::with_stage(std::string stage) const {
  Error tagged(kind_, "stage '" + stage + "': " + what());
  tagged.stage_ = std::move(stage);
  return tagged;
}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace spinmf
