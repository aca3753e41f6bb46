#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace equipart {

/// Shortest round-trip decimal form; "-inf", "inf" and "nan" spelled out.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// Fixed number of decimals, for human-facing tables.
inline std::string format_fixed(double x, int decimals) {
  if (!std::isfinite(x)) return format_double(x);
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, decimals);
  return std::string(buf, res.ptr);
}

}  // namespace equipart
