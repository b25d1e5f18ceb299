#pragma once

#include <stdexcept>
#include <string>

namespace fractop {

// Numeric values match the C API status codes and the CLI exit codes.
enum class ErrorCode : int {
  InvalidInput = 2,
  ResourceLimit = 3,
  Refused = 4,
  Unsupported = 5,
  Internal = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail(ErrorCode::InvalidInput, msg);
}

}  // namespace fractop
