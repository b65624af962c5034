#pragma once

#include <stdexcept>
#include <string>

namespace graql {

enum class ErrorCode {
  InvalidArgument = 1,
  Capacity,
  NoPath,
  Infeasible,
  Contract,
  Io,
  Parse,
};

// Every failure in the library surfaces as a graql::Error carrying a code the
// C API maps one-to-one onto graql_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace graql
