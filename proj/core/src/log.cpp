#include "flowknn/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

namespace flowknn {
namespace {

LogLevel parse_level() {
  const char* env = std::getenv("FLOWKNN_LOG");
  if (env == nullptr) return LogLevel::warn;
  const std::string value(env);
  if (value == "error") return LogLevel::error;
  if (value == "warn") return LogLevel::warn;
  if (value == "info") return LogLevel::info;
  if (value == "debug") return LogLevel::debug;
  return LogLevel::warn;
}

const char* level_name(LogLevel level) {
  switch (level) {
    case LogLevel::error: return "error";
    case LogLevel::warn: return "warn";
    case LogLevel::info: return "info";
    case LogLevel::debug: return "debug";
  }
  return "?";
}

}  // namespace

LogLevel log_level() {
  static const LogLevel level = parse_level();
  return level;
}

void log(LogLevel level, std::string_view message) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  std::fprintf(stderr, "flowknn %s: %.*s\n", level_name(level),
               static_cast<int>(message.size()), message.data());
}

void log_error(std::string_view message) { log(LogLevel::error, message); }
void log_warn(std::string_view message) { log(LogLevel::warn, message); }
void log_info(std::string_view message) { log(LogLevel::info, message); }
void log_debug(std::string_view message) { log(LogLevel::debug, message); }

}  // namespace flowknn
