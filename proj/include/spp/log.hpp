// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace spp {

/// Logging verbosity, controlled by the SPP_LOG environment variable:
/// "quiet"/"0", "warn"/"1" (default), "info"/"2", "debug"/"3".
/// Unrecognized values behave like the default.
enum class LogLevel { quiet = 0, warn = 1, info = 2, debug = 3 };

LogLevel log_level();
bool log_enabled(LogLevel level);
void log_line(LogLevel level, const std::string& message);  // to stderr

}  // namespace spp
