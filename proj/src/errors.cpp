#include "skg/errors.hpp"

namespace skg {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Argument: return "argument error";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::Lookup: return "lookup error";
    case ErrorKind::State: return "state error";
    case ErrorKind::Degenerate: return "degenerate input";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Numeric: return "numeric error";
  }
  return "error";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Argument:
      return 2;
    case ErrorKind::Parse:
    case ErrorKind::Validation:
    case ErrorKind::Lookup:
    case ErrorKind::State:
      return 3;
    case ErrorKind::Degenerate:
    case ErrorKind::Domain:
    case ErrorKind::Numeric:
      return 4;
  }
  return 1;
}

}  // namespace skg
