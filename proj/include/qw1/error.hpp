#pragma once

#include <stdexcept>
#include <string>

namespace qw1 {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  CapExceeded,
  IndexOutOfRange,
  NotHermitian,
  NotDensity,
  NotTraceless,
  LayoutMismatch,
  LengthMismatch,
  SupportMismatch,
  SupportViolation,
  ParameterRange,
  EigenFailure,
  NoFixedPoint,
  SolverFailure,
  ParseError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace qw1
