#pragma once

#include <cstdio>
#include <string>

namespace mcf {

/// Fixed 17-significant-digit rendering used for every numeric output.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace mcf
