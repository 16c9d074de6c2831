#include "sharpbounds/detail/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace sharpbounds::detail {

std::string fmt_shortest(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

double round_2dp(double x) {
  if (!std::isfinite(x)) return x;
  return std::round(x * 100.0) / 100.0;
}

std::string fmt_2dp(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", round_2dp(x));
  return buf;
}

}  // namespace sharpbounds::detail
