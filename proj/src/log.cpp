#include "mcas/log.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

namespace mcas {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("MCAS_LOG");
    if (env == nullptr) return LogLevel::Warn;
    const std::string value(env);
    if (value == "debug") return LogLevel::Debug;
    if (value == "info") return LogLevel::Info;
    return LogLevel::Warn;
  }();
  return level;
}

void log_line(LogLevel level, std::string_view message) {
  const char* tag = level == LogLevel::Debug ? "debug"
                    : level == LogLevel::Info ? "info"
                                              : "warn";
  std::cerr << "[mcas:" << tag << "] " << message << "\n";
}

}  // namespace mcas
