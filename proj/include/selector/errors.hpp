#pragma once

#include <stdexcept>
#include <string>

namespace selector {

/// Coarse error classes; the CLI maps each to a distinct exit code.
enum class ErrorClass {
  InvalidArgument,  // bad sizes, ranges, shapes
  Parse,            // malformed file content or flag values
  Io,               // unreadable/unwritable files
  Degenerate,       // mathematically undefined input (zero variance, r <= -1, ...)
  LimitExceeded,    // enumeration or variable-count guard tripped
  MissingData       // incomplete price coverage over a requested window
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& msg) : std::runtime_error(msg), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

[[noreturn]] inline void fail(ErrorClass cls, const std::string& msg) { throw Error(cls, msg); }

inline void require(bool cond, ErrorClass cls, const std::string& msg) {
  if (!cond) fail(cls, msg);
}

}  // namespace selector
