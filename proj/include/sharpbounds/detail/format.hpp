#pragma once

#include <string>

namespace sharpbounds::detail {

/// Shortest decimal string that round-trips to the same double.
std::string fmt_shortest(double x);

/// Fixed two-decimal display with half-away-from-zero rounding.
std::string fmt_2dp(double x);

/// Half-away-from-zero rounding to two decimals.
double round_2dp(double x);

}  // namespace sharpbounds::detail
