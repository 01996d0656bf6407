#pragma once

#include <string_view>

namespace aispath::cli {

enum class LogLevel { quiet, warn, info };

void set_log_level(LogLevel level);
void log_warn(std::string_view msg);
void log_info(std::string_view msg);

}  // namespace aispath::cli
