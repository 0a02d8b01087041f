#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>

namespace gridmon {

enum class LogLevel : int { Debug = 0, Info = 1, Warn = 2, Error = 3, Quiet = 4 };

/// Verbosity comes from the GRIDMON_LOG environment variable
/// (debug|info|warn|error|quiet); default is warn.
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("GRIDMON_LOG");
    if (env == nullptr) return LogLevel::Warn;
    const std::string_view v(env);
    if (v == "debug") return LogLevel::Debug;
    if (v == "info") return LogLevel::Info;
    if (v == "warn") return LogLevel::Warn;
    if (v == "error") return LogLevel::Error;
    if (v == "quiet") return LogLevel::Quiet;
    return LogLevel::Warn;
  }();
  return level;
}

inline void log_at(LogLevel level, const char* tag, const std::string& msg) {
  if (static_cast<int>(level) < static_cast<int>(log_level())) return;
  std::fprintf(stderr, "[%s] %s\n", tag, msg.c_str());
}

inline void log_debug(const std::string& msg) { log_at(LogLevel::Debug, "debug", msg); }
inline void log_info(const std::string& msg) { log_at(LogLevel::Info, "info", msg); }
inline void log_warn(const std::string& msg) { log_at(LogLevel::Warn, "warn", msg); }
inline void log_error(const std::string& msg) { log_at(LogLevel::Error, "error", msg); }

}  // namespace gridmon
