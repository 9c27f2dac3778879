#include "spdo/warnings.hpp"

#include <cstdio>
#include <mutex>
#include <utility>
#include <vector>

namespace spdo {

namespace {
std::mutex g_mutex;
WarningSink g_sink;  // empty -> stderr
}  // namespace

void warn(const std::string& message) {
  // The lock is held across the sink call so capture targets need no locking
  // of their own; sinks must not call back into warn()/set_warning_sink().
  std::lock_guard<std::mutex> lock(g_mutex);
  if (g_sink) {
    g_sink(message);
  } else {
    std::fprintf(stderr, "spdo: warning: %s\n", message.c_str());
  }
}

WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard<std::mutex> lock(g_mutex);
  std::swap(g_sink, sink);
  return sink;
}

WarningCapture::WarningCapture(std::vector<std::string>& out) {
  previous_ = set_warning_sink([&out](const std::string& m) { out.push_back(m); });
}

WarningCapture::~WarningCapture() { set_warning_sink(previous_); }

}  // namespace spdo
