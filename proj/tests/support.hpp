#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>

#include "sharpbounds/core.hpp"

namespace testsupport {

// Absolute-tolerance matcher. doctest's Approx scales its epsilon by the
// operand magnitudes, which is the wrong shape for checks against frozen
// decimal constants.
struct Near {
  double target;
  double tol;
};

inline Near near(double target, double tol) { return Near{target, tol}; }

inline bool operator==(double x, const Near& n) {
  return std::fabs(x - n.target) <= n.tol;
}

inline bool operator==(const Near& n, double x) { return x == n; }

inline std::ostream& operator<<(std::ostream& os, const Near& n) {
  return os << n.target << " +/- " << n.tol;
}

// xorshift64* input generator, unrelated to the library's sampler so
// generator and library cannot share a bug.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b9ull) {}

  std::uint64_t next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545f4914f6cdd1dull;
  }

  // uniform in [0, 1)
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double in(double lo, double hi) { return lo + (hi - lo) * unit(); }

  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

// Margins kept away from the probability boundaries so odds stay finite;
// boundary behavior gets dedicated tests.
inline sharpbounds::ObservedMargins random_margins(TestRng& rng) {
  return sharpbounds::ObservedMargins(rng.in(0.05, 0.95), rng.in(0.02, 0.98),
                                      rng.in(0.02, 0.98));
}

struct FeasibleCase {
  sharpbounds::ObservedMargins obs;
  sharpbounds::SensitivityParams params;
};

// Random feasible (obs, m, M); each parameter lands on a region corner with
// probability 1/4 per side, so boundary pairs are exercised routinely.
inline FeasibleCase random_feasible(TestRng& rng) {
  const sharpbounds::ObservedMargins obs = random_margins(rng);
  const sharpbounds::FeasibleRegion region = sharpbounds::feasible_region(obs);
  const double m_star = region.m_star.value();
  const double big_m_star = region.big_m_star.value();

  double m;
  switch (rng.below(4)) {
    case 0: m = 0.0; break;
    case 1: m = m_star; break;
    default: m = rng.in(0.0, m_star); break;
  }
  double big_m;
  switch (rng.below(4)) {
    case 0: big_m = big_m_star; break;
    case 1: big_m = 1.0; break;
    default: big_m = rng.in(big_m_star, 1.0); break;
  }
  return FeasibleCase{obs, sharpbounds::validate_params(region, m, big_m)};
}

}  // namespace testsupport
