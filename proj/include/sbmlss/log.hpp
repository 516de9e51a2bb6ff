#pragma once

#include <functional>
#include <iostream>
#include <mutex>
#include <set>
#include <string>

namespace sbmlss {

using WarningSink = std::function<void(const std::string&)>;

namespace detail {
inline WarningSink& warning_sink() {
  static WarningSink sink = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
  return sink;
}
inline std::mutex& warning_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

// Replace the warning sink; pass an empty function to silence warnings.
inline void set_warning_sink(WarningSink sink) {
  std::lock_guard lock(detail::warning_mutex());
  detail::warning_sink() = std::move(sink);
}

inline void warn(const std::string& msg) {
  std::lock_guard lock(detail::warning_mutex());
  if (detail::warning_sink()) detail::warning_sink()(msg);
}

// Emit `msg` only the first time this exact text is seen.
inline void warn_once(const std::string& msg) {
  static std::set<std::string> seen;
  {
    std::lock_guard lock(detail::warning_mutex());
    if (!seen.insert(msg).second) return;
  }
  warn(msg);
}

}  // namespace sbmlss
