#pragma once

#include <stdexcept>
#include <string>

namespace emai {

// Values double as CLI exit codes and C API status codes.
enum class ErrorCode : int {
  kGeneric = 1,
  kConfig = 2,
  kMissingArtifact = 3,
  kNumeric = 4,
  kIncompatible = 5,
  kInvalidArgument = 6,
  kParse = 7,
};

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

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace emai
