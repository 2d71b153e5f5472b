#pragma once

#include <charconv>
#include <string>

namespace adbvp::detail {

/// Shortest round-trip decimal form of a double.
inline std::string fmt_num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "?";
  return std::string(buf, ptr);
}

}  // namespace adbvp::detail
