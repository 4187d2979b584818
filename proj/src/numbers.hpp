#pragma once

#include <charconv>
#include <string>

namespace storygame::detail {

/// Shortest text that parses back to exactly `value`.
inline std::string shortest(double value) {
  if (value == 0.0) return "0";
  char buf[32];
  auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

/// Fixed-point text with trailing zeros trimmed, for charts and logs.
inline std::string fixed(double value, int precision) {
  char buf[64];
  auto result = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, precision);
  std::string s(buf, result.ptr);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

}  // namespace storygame::detail
