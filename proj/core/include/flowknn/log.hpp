#pragma once

#include <string_view>

namespace flowknn {

enum class LogLevel : int { error = 0, warn = 1, info = 2, debug = 3 };

// Threshold parsed once from FLOWKNN_LOG (error|warn|info|debug); warn when
// unset or unrecognized. Messages go to stderr.
LogLevel log_level();

void log(LogLevel level, std::string_view message);
void log_error(std::string_view message);
void log_warn(std::string_view message);
void log_info(std::string_view message);
void log_debug(std::string_view message);

}  // namespace flowknn
