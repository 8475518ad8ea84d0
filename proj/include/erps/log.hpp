#pragma once

#include <functional>
#include <string>

namespace erps {

/// Receives non-fatal diagnostics (step-size warnings, dead-zone retries).
using WarningHandler = std::function<void(const std::string&)>;

/// Installs a process-wide handler; an empty handler restores the default,
/// which writes "warning: <msg>" to stderr. Returns the previous handler.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(const std::string& message);

}  // namespace erps
