#pragma once

#include <functional>
#include <string>
#include <vector>

namespace spdo {

// Report a non-fatal numerical or configuration issue.  By default the
// message goes to stderr prefixed with "spdo: warning:".  A sink can be
// installed to capture warnings programmatically (the study harness does
// this to attach per-row diagnostics to its report).
void warn(const std::string& message);

using WarningSink = std::function<void(const std::string&)>;

// Install a sink; returns the previous one.  Pass nullptr to restore the
// default stderr behaviour.
WarningSink set_warning_sink(WarningSink sink);

// RAII helper that captures warnings into a vector for its lifetime.
class WarningCapture {
 public:
  explicit WarningCapture(std::vector<std::string>& out);
  ~WarningCapture();
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;

 private:
  WarningSink previous_;
};

}  // namespace spdo
