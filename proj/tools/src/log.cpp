#include "aispath/cli/log.hpp"

#include <iostream>
#include <mutex>

namespace aispath::cli {

namespace {
LogLevel g_level = LogLevel::info;
std::mutex g_mutex;
}  // namespace

void set_log_level(LogLevel level) { g_level = level; }

void log_warn(std::string_view msg) {
  if (g_level < LogLevel::warn) return;
  std::lock_guard lock(g_mutex);
  std::cerr << "warning: " << msg << '\n';
}

void log_info(std::string_view msg) {
  if (g_level < LogLevel::info) return;
  std::lock_guard lock(g_mutex);
  std::cerr << msg << '\n';
}

}  // namespace aispath::cli
