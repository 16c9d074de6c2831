#include "sharpbounds/core.hpp"

#include <algorithm>
#include <cmath>

#include "sharpbounds/detail/format.hpp"

namespace sharpbounds {

InvalidProbability::InvalidProbability(double value)
    : Error("probability out of range: " + detail::fmt_shortest(value) +
            " is not in [0, 1]"),
      value(value) {}

InvertedParams::InvertedParams(double m, double big_m)
    : InfeasibleParams("inverted sensitivity parameters: m = " +
                       detail::fmt_shortest(m) + " exceeds M = " +
                       detail::fmt_shortest(big_m)),
      m(m),
      big_m(big_m) {}

Probability::Probability(double value) {
  if (!(value >= -kProbabilityTol && value <= 1.0 + kProbabilityTol)) {
    throw InvalidProbability(value);
  }
  value_ = std::clamp(value, 0.0, 1.0);
}

namespace {

int check_exposure(int e) {
  if (e != 0 && e != 1) {
    throw std::invalid_argument("exposure level must be 0 or 1");
  }
  return e;
}

}  // namespace

ObservedMargins::ObservedMargins(Probability p_e1, Probability p_d1_e0,
                                 Probability p_d1_e1)
    : p_e1_(p_e1), p_d1_e0_(p_d1_e0), p_d1_e1_(p_d1_e1) {
  // One arm unobserved leaves a conditional risk undefined.
  if (p_e1.value() < kProbabilityTol || p_e1.value() > 1.0 - kProbabilityTol) {
    throw Error("p(E=1) = " + detail::fmt_shortest(p_e1.value()) +
                ": both exposure arms must be observed (0 < p(E=1) < 1)");
  }
}

ObservedMargins::ObservedMargins(double p_e1, double p_d1_e0, double p_d1_e1)
    : ObservedMargins(Probability(p_e1), Probability(p_d1_e0),
                      Probability(p_d1_e1)) {}

double ObservedMargins::p_e(int e) const {
  return check_exposure(e) == 1 ? p_e1_.value() : 1.0 - p_e1_.value();
}

double ObservedMargins::p_d1_given_e(int e) const {
  return check_exposure(e) == 1 ? p_d1_e1_.value() : p_d1_e0_.value();
}

double ObservedMargins::p_d1_and_e(int e) const {
  return p_d1_given_e(e) * p_e(e);
}

SensitivityParams::SensitivityParams(Probability m, Probability big_m)
    : m_(m), big_m_(big_m) {
  if (m.value() > big_m.value()) {
    throw InvertedParams(m.value(), big_m.value());
  }
}

ProbabilityInterval::ProbabilityInterval(Probability lower, Probability upper,
                                         int exposure_level)
    : lower_(lower), upper_(upper), exposure_level_(check_exposure(exposure_level)) {
  if (lower.value() > upper.value()) {
    throw Error("interval lower bound exceeds upper bound");
  }
}

bool ProbabilityInterval::contains(double x, double tol) const {
  return lower_.value() - tol <= x && x <= upper_.value() + tol;
}

FeasibleRegion feasible_region(const ObservedMargins& obs) {
  const double lo = std::min(obs.p_d1_e0().value(), obs.p_d1_e1().value());
  const double hi = std::max(obs.p_d1_e0().value(), obs.p_d1_e1().value());
  return FeasibleRegion{Probability(lo), Probability(hi)};
}

SensitivityParams validate_params(const FeasibleRegion& region, double raw_m,
                                  double raw_big_m) {
  const double m_star = region.m_star.value();
  const double big_m_star = region.big_m_star.value();
  if (raw_m > raw_big_m + kFeasibilityTol) {
    throw InvertedParams(raw_m, raw_big_m);
  }
  if (raw_big_m < big_m_star - kFeasibilityTol) {
    throw InfeasibleM(raw_big_m, big_m_star,
                      "M must lie in [" + detail::fmt_shortest(big_m_star) +
                          ", 1] (got " + detail::fmt_shortest(raw_big_m) + ")");
  }
  if (raw_big_m > 1.0 + kFeasibilityTol) {
    throw InfeasibleM(raw_big_m, 1.0,
                      "M must lie in [" + detail::fmt_shortest(big_m_star) +
                          ", 1] (got " + detail::fmt_shortest(raw_big_m) + ")");
  }
  if (raw_m < -kFeasibilityTol) {
    throw InfeasibleSmallM(raw_m, 0.0,
                           "m must lie in [0, " + detail::fmt_shortest(m_star) +
                               "] (got " + detail::fmt_shortest(raw_m) + ")");
  }
  if (raw_m > m_star + kFeasibilityTol) {
    throw InfeasibleSmallM(raw_m, m_star,
                           "m must lie in [0, " + detail::fmt_shortest(m_star) +
                               "] (got " + detail::fmt_shortest(raw_m) + ")");
  }
  const double m = std::clamp(raw_m, 0.0, m_star);
  const double big_m = std::clamp(raw_big_m, big_m_star, 1.0);
  return SensitivityParams(Probability(m), Probability(big_m));
}

SensitivityParams validate_params(const ObservedMargins& obs, double raw_m,
                                  double raw_big_m) {
  return validate_params(feasible_region(obs), raw_m, raw_big_m);
}

ProbabilityInterval counterfactual_interval(const ObservedMargins& obs,
                                            const SensitivityParams& params,
                                            int e) {
  check_exposure(e);
  // Precondition: params feasible for these margins. Revalidating is two
  // comparisons, so enforce it.
  const FeasibleRegion region = feasible_region(obs);
  if (params.m().value() > region.m_star.value() + kFeasibilityTol ||
      params.big_m().value() < region.big_m_star.value() - kFeasibilityTol) {
    validate_params(region, params.m().value(), params.big_m().value());
  }
  const double joint = obs.p_d1_and_e(e);
  const double other_arm = obs.p_e(1 - e);
  const double lower = joint + other_arm * params.m().value();
  const double upper = joint + other_arm * params.big_m().value();
  return ProbabilityInterval(Probability(lower), Probability(upper), e);
}

Probability crude_risk(const ObservedMargins& obs, int e) {
  return Probability(obs.p_d1_given_e(e));
}

}  // namespace sharpbounds
