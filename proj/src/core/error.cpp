#include "fred/error.hpp"

#include <iostream>
#include <mutex>

namespace fred {

namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

void default_sink(std::string_view msg) { std::cerr << "warning: " << msg << '\n'; }

WarningSink& sink_slot() {
  static WarningSink sink = default_sink;
  return sink;
}

}  // namespace

void raise(ErrorCode code, const std::string& message) { throw Error(code, message); }

void set_warning_sink(WarningSink sink) {
  std::lock_guard lock(sink_mutex());
  if (sink) {
    sink_slot() = std::move(sink);
  } else {
    sink_slot() = default_sink;
  }
}

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex());
  sink_slot()(message);
}

}  // namespace fred
