#include "krein/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace krein {

static LogLevel parse_level() {
    const char* env = std::getenv("KREIN_LOG");
    if (!env) return LogLevel::warn;
    if (!std::strcmp(env, "debug")) return LogLevel::debug;
    if (!std::strcmp(env, "info"))  return LogLevel::info;
    if (!std::strcmp(env, "warn"))  return LogLevel::warn;
    if (!std::strcmp(env, "error")) return LogLevel::error;
    if (!std::strcmp(env, "off"))   return LogLevel::off;
    return LogLevel::warn;
}

LogLevel log_level() {
    static const LogLevel lvl = parse_level();
    return lvl;
}

void log_message(LogLevel level, const std::string& msg) {
    if (static_cast<int>(level) < static_cast<int>(log_level())) return;
    static const char* names[] = {"debug", "info", "warn", "error"};
    const int i = static_cast<int>(level);
    if (i < 0 || i > 3) return;
    std::fprintf(stderr, "[krein:%s] %s\n", names[i], msg.c_str());
}

} // namespace krein
