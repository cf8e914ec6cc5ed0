#pragma once

#include <sstream>
#include <string_view>

namespace mcas {

enum class LogLevel { Debug = 0, Info = 1, Warn = 2 };

/// Level from the MCAS_LOG env var ("debug" | "info"); defaults to Warn.
LogLevel log_level();

void log_line(LogLevel level, std::string_view message);

namespace detail {
template <typename... Args>
void log_fmt(LogLevel level, const Args&... args) {
  if (level < log_level()) return;
  std::ostringstream os;
  (os << ... << args);
  log_line(level, os.str());
}
}  // namespace detail

template <typename... Args>
void log_debug(const Args&... args) {
  detail::log_fmt(LogLevel::Debug, args...);
}

template <typename... Args>
void log_info(const Args&... args) {
  detail::log_fmt(LogLevel::Info, args...);
}

}  // namespace mcas
