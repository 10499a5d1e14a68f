#pragma once

#include <cstdio>
#include <string>

namespace sitnikov {

/// Scientific notation with 9 significant digits, '.' decimal separator.
inline std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.8e", v);
  return buf;
}

}  // namespace sitnikov
