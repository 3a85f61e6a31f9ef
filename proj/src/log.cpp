// SPDX-License-Identifier: Apache-2.0
#include "spp/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace spp {

namespace {

LogLevel parse_level() {
    const char* raw = std::getenv("SPP_LOG");
    if (!raw) return LogLevel::warn;
    std::string v(raw);
    if (v == "quiet" || v == "0") return LogLevel::quiet;
    if (v == "warn" || v == "1") return LogLevel::warn;
    if (v == "info" || v == "2") return LogLevel::info;
    if (v == "debug" || v == "3") return LogLevel::debug;
    return LogLevel::warn;
}

std::mutex& log_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

LogLevel log_level() {
    static LogLevel level = parse_level();
    return level;
}

bool log_enabled(LogLevel level) {
    return static_cast<int>(level) <= static_cast<int>(log_level()) && level != LogLevel::quiet;
}

void log_line(LogLevel level, const std::string& message) {
    if (!log_enabled(level)) return;
    static const char* names[] = {"", "warn", "info", "debug"};
    std::lock_guard<std::mutex> lock(log_mutex());
    std::cerr << "[spp:" << names[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace spp
