#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "xmodal/error.hpp"

namespace xmodal {

/// Shortest decimal text that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("cannot format floating-point value");
  return std::string(buf, end);
}

inline double parse_double(std::string_view text) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw Error("invalid number '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace xmodal

namespace xmodal {

inline std::size_t parse_unsigned(std::string_view text) {
  std::size_t v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw Error("invalid unsigned integer '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace xmodal
