#pragma once

#include <cstddef>
#include <string_view>

namespace drugsent::log {

/// Writes "warning: <msg>" to stderr unless quiet mode is on. Thread-safe.
void warn(std::string_view msg);
void info(std::string_view msg);

void set_quiet(bool quiet);

/// Total warnings emitted by this process (including suppressed ones).
std::size_t warning_count();

}  // namespace drugsent::log
