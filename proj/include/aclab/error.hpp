#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aclab {

enum class ErrorKind {
  Domain,
  QuadratureFailure,
  Bracket,
  SymmetryViolation,
  ConstructionFailure,
  IdentityViolation,
  Resolution,
  BlowUp,
  Window,
  Sign,
  Usage,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library. The kind drives
/// CLI exit codes; the message carries the details.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace aclab
