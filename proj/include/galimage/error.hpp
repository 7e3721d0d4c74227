#pragma once

#include <stdexcept>
#include <string>

namespace galimage {

enum class ErrorKind {
  invalid_input,
  incomplete,
  unavailable,
  network,
  parse,
  decomposition,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::incomplete: return "incomplete";
    case ErrorKind::unavailable: return "unavailable";
    case ErrorKind::network: return "network";
    case ErrorKind::parse: return "parse";
    case ErrorKind::decomposition: return "decomposition";
  }
  return "unknown";
}

/// Exception carrying a machine-readable kind; the CLI maps kinds to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::invalid_input, what);
}

}  // namespace galimage
