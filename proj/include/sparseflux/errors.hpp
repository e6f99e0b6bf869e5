#pragma once

#include <stdexcept>
#include <string>

namespace sparseflux {

/// Error categories. The CLI maps each to a distinct exit code.
enum class ErrorKind {
  Parse,      // malformed input file or manifest
  Config,     // invalid parameter or inconsistent dimensions
  Infeasible, // a constraint set that must be feasible is not
  Numerical,  // LP backend could not produce a trustworthy answer
  Refused,    // oracle cap exceeded
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Infeasible: return 2;
    case ErrorKind::Parse:
    case ErrorKind::Config:
    case ErrorKind::Refused: return 3;
    case ErrorKind::Numerical: return 4;
  }
  return 1;
}

}  // namespace sparseflux
