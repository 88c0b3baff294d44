#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fred {

enum class ErrorCode {
  InvalidArgument = 1,
  Io = 2,
  Decode = 3,
  Validation = 4,
  Format = 5,
  NotFound = 6,
  Limit = 7,
  Internal = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

// Non-fatal conditions (fingerprint mismatch, empty n-gram set, band clamping)
// are reported through a process-wide sink. The default sink writes to stderr;
// an empty sink restores it.
using WarningSink = std::function<void(std::string_view)>;

void set_warning_sink(WarningSink sink);
void warn(std::string_view message);

}  // namespace fred
