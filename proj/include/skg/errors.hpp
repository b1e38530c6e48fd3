#pragma once

#include <stdexcept>
#include <string>

namespace skg {

// Failure categories. The CLI maps them onto process exit codes.
enum class ErrorKind {
  Argument,    // bad caller input: sizes, ranges, flags
  Parse,       // malformed file content
  Validation,  // well-formed but invalid data (negative weight, ...)
  Lookup,      // unknown node id
  State,       // operation called on an object in the wrong state
  Degenerate,  // data admits no answer (all-zero values, identical vectors)
  Domain,      // formula evaluated outside its domain
  Numeric,     // non-finite arithmetic
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

// 2 argument, 3 data, 4 numeric/degenerate.
int exit_code(ErrorKind kind) noexcept;

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace skg
