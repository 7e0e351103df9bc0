#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace wqed {

/// Stable CSV number format: %.12g, with NaN always rendered as "NaN" so
/// re-runs are byte-identical across platforms.
inline std::string csv_number(double x) {
  if (std::isnan(x)) return "NaN";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace wqed
