#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lrdreg {

/// Failure categories. The CLI maps each one to a distinct exit code.
enum class ErrorCategory {
  domain = 2,       // parameter outside its mathematical domain
  config = 3,       // inconsistent or incomplete specification
  data = 4,         // malformed numeric input (NaN, misaligned arrays)
  io = 5,           // filesystem failures
  unsupported = 6,  // operation not defined for the requested family
  empty_request = 7,
  stationarity = 8,
};

inline std::string_view category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::domain: return "domain";
    case ErrorCategory::config: return "config";
    case ErrorCategory::data: return "data";
    case ErrorCategory::io: return "io";
    case ErrorCategory::unsupported: return "unsupported";
    case ErrorCategory::empty_request: return "empty-request";
    case ErrorCategory::stationarity: return "stationarity";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(std::string(category_name(category)) + " error: " + what),
        category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& what) {
  throw Error(category, what);
}

inline void require(bool condition, ErrorCategory category, const std::string& what) {
  if (!condition) fail(category, what);
}

}  // namespace lrdreg
