#include "curveorbit/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>

namespace curveorbit {

namespace {

LogLevel from_env() {
    const char* v = std::getenv("CURVEORBIT_LOG");
    if (!v) return LogLevel::Warn;
    std::string s(v);
    if (s == "off" || s == "0") return LogLevel::Off;
    if (s == "info" || s == "2") return LogLevel::Info;
    if (s == "debug" || s == "3") return LogLevel::Debug;
    return LogLevel::Warn;
}

std::atomic<int>& level_slot() {
    static std::atomic<int> slot{static_cast<int>(from_env())};
    return slot;
}

void emit(LogLevel at, const char* tag, const std::string& msg) {
    if (static_cast<int>(at) <= level_slot().load()) std::cerr << "[" << tag << "] " << msg << "\n";
}

}  // namespace

LogLevel log_level() { return static_cast<LogLevel>(level_slot().load()); }
void set_log_level(LogLevel level) { level_slot().store(static_cast<int>(level)); }
void log_warn(const std::string& msg) { emit(LogLevel::Warn, "warn", msg); }
void log_info(const std::string& msg) { emit(LogLevel::Info, "info", msg); }
void log_debug(const std::string& msg) { emit(LogLevel::Debug, "debug", msg); }

}  // namespace curveorbit
