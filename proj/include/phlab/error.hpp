#pragma once

#include <stdexcept>
#include <string>

namespace phlab {

/// Failure categories; each maps onto one process exit code of the CLI.
enum class ErrorKind {
  InvalidArgument,  // precondition violated by a caller
  Capability,       // request outside the supported range (m > 3, n > 256, ...)
  Usage,            // bad flag, bad config key
  Numerical,        // solver did not converge, matrix not positive definite, ...
  Io,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Capability: return "capability";
    case ErrorKind::Usage: return "usage";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by cholesky when a pivot is not strictly positive.
class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(std::size_t pivot)
      : Error(ErrorKind::Numerical,
              "matrix is not positive definite (pivot " + std::to_string(pivot) + ")"),
        pivot_(pivot) {}
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

namespace detail {
[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail(ErrorKind::InvalidArgument, msg);
}
}  // namespace detail

}  // namespace phlab
