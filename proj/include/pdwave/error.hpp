#pragma once

#include <stdexcept>
#include <string>

namespace pdwave {

enum class ErrorCode {
  InvalidArgument,
  GridMismatch,
  Overflow,
  Degenerate,
  NotConverged,
  Subsonic,
  Instability,
  Config,
};

const char* to_string(ErrorCode code);

// All library failures are reported through this exception; the C API maps
// the code onto its status values.
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

}  // namespace pdwave
