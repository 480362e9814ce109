#pragma once

#include <stdexcept>
#include <string>

namespace jsrec {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  EmptySupport,
  AmbiguousSign,
  AmbiguousSupport,
  DegenerateRow,
  BudgetExceeded,
  SearchExhausted,
  IoError,
};

// Domain error carrying a machine-checkable code next to the message.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace jsrec
