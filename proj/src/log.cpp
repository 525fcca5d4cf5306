#include "drugsent/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace drugsent::log {
namespace {
std::atomic<bool> g_quiet{false};
std::atomic<std::size_t> g_warnings{0};
std::mutex g_mutex;
}  // namespace

void warn(std::string_view msg) {
  g_warnings.fetch_add(1, std::memory_order_relaxed);
  if (g_quiet.load(std::memory_order_relaxed)) return;
  std::lock_guard lock(g_mutex);
  std::cerr << "warning: " << msg << '\n';
}

void info(std::string_view msg) {
  if (g_quiet.load(std::memory_order_relaxed)) return;
  std::lock_guard lock(g_mutex);
  std::cerr << msg << '\n';
}

void set_quiet(bool quiet) { g_quiet.store(quiet); }

std::size_t warning_count() { return g_warnings.load(); }

}  // namespace drugsent::log
