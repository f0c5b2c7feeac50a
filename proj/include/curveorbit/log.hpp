#pragma once

#include <string>

namespace curveorbit {

enum class LogLevel { Off = 0, Warn = 1, Info = 2, Debug = 3 };

// Level comes from CURVEORBIT_LOG (off, warn, info, debug); default warn.
LogLevel log_level();
void set_log_level(LogLevel level);
void log_warn(const std::string& msg);
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace curveorbit
