#pragma once

#include <cstdio>
#include <string>

namespace sltl {

/// Shortest decimal form that round-trips a double exactly ('.' decimal,
/// independent of the global locale state). Keeps CSV output byte-stable
/// across runs.
inline std::string format_double(double value) {
  if (value == 0.0) return "0";  // fold negative zero
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    double parsed = 0.0;
    std::sscanf(buf, "%lf", &parsed);
    if (parsed == value) break;
  }
  return buf;
}

}  // namespace sltl
