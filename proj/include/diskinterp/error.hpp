#pragma once

#include <stdexcept>
#include <string>

namespace diskinterp {

/// Failure categories surfaced by the library. The CLI maps them onto exit
/// codes (parameter problems exit 2, everything unexpected exits 4).
enum class ErrorCode {
  InvalidArgument,
  NotUniformlySeparated,
  NonConvergence,
  ConstraintViolation,
  NearZero,
  Io,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::NotUniformlySeparated: return "NOT_UNIFORMLY_SEPARATED";
    case ErrorCode::NonConvergence: return "NON_CONVERGENCE";
    case ErrorCode::ConstraintViolation: return "CONSTRAINT_VIOLATION";
    case ErrorCode::NearZero: return "NEAR_ZERO";
    case ErrorCode::Io: return "IO";
  }
  return "UNKNOWN";
}

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

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::InvalidArgument, what);
}

}  // namespace diskinterp
