#pragma once

#include <compare>

#include "sharpbounds/errors.hpp"

namespace sharpbounds {

/// Tolerance for [0,1] range checks at Probability construction.
inline constexpr double kProbabilityTol = 1e-12;

/// Tolerance for feasible-region comparisons (accommodates margins computed
/// from finite counts).
inline constexpr double kFeasibilityTol = 1e-9;

/// A probability. Construction rejects values outside [0,1] beyond
/// kProbabilityTol and clamps the in-tolerance remainder onto [0,1].
class Probability {
 public:
  constexpr Probability() = default;
  explicit Probability(double value);

  double value() const { return value_; }
  friend auto operator<=>(Probability, Probability) = default;

 private:
  double value_ = 0.0;
};

/// The observed-data distribution: p(E=1) and the two conditional risks
/// p(D=1|E=e). Both exposure arms must be observed, so p(E=1) is rejected
/// at 0 and 1. Joint cells p(D=d,E=e) are derived on demand.
class ObservedMargins {
 public:
  ObservedMargins(Probability p_e1, Probability p_d1_e0, Probability p_d1_e1);
  ObservedMargins(double p_e1, double p_d1_e0, double p_d1_e1);

  Probability p_e1() const { return p_e1_; }
  Probability p_d1_e0() const { return p_d1_e0_; }
  Probability p_d1_e1() const { return p_d1_e1_; }

  /// p(E=e)
  double p_e(int e) const;
  /// p(D=1|E=e)
  double p_d1_given_e(int e) const;
  /// p(D=1, E=e)
  double p_d1_and_e(int e) const;

 private:
  Probability p_e1_, p_d1_e0_, p_d1_e1_;
};

/// Data-imposed limits on the sensitivity parameters:
/// m* = min_e p(D=1|E=e) and M* = max_e p(D=1|E=e). Valid parameter pairs
/// satisfy M* <= M <= 1 and 0 <= m <= m*.
struct FeasibleRegion {
  Probability m_star;
  Probability big_m_star;
};

/// Analyst-specified extrema of p(D=1|E=e,U=u) over all (e,u). Construct
/// through validate_params so the pair is checked against the data.
class SensitivityParams {
 public:
  SensitivityParams(Probability m, Probability big_m);

  Probability m() const { return m_; }
  Probability big_m() const { return big_m_; }

 private:
  Probability m_, big_m_;
};

/// Bounds (LB_e, UB_e) on a counterfactual probability p(D_e=1).
class ProbabilityInterval {
 public:
  ProbabilityInterval(Probability lower, Probability upper, int exposure_level);

  Probability lower() const { return lower_; }
  Probability upper() const { return upper_; }
  int exposure_level() const { return exposure_level_; }
  double width() const { return upper_.value() - lower_.value(); }
  bool contains(double x, double tol = 0.0) const;

 private:
  Probability lower_, upper_;
  int exposure_level_;
};

/// The (m*, M*) limits implied by the observed margins.
FeasibleRegion feasible_region(const ObservedMargins& obs);

/// Validates a raw (m, M) pair against the feasible region of `obs`
/// (tolerance kFeasibilityTol, then clamped onto the region). Throws
/// InvertedParams, InfeasibleM or InfeasibleSmallM, each carrying the
/// violated boundary.
SensitivityParams validate_params(const ObservedMargins& obs, double raw_m,
                                  double raw_big_m);
SensitivityParams validate_params(const FeasibleRegion& region, double raw_m,
                                  double raw_big_m);

/// Bounds on p(D_e=1):
///   lower = p(D=1,E=e) + p(E=1-e)*m,  upper = p(D=1,E=e) + p(E=1-e)*M.
/// With (m=0, M=1) this is the assumption-free interval
/// [p(D=1,E=e), p(D=1,E=e) + p(E=1-e)]. `params` is revalidated against
/// feasible_region(obs).
ProbabilityInterval counterfactual_interval(const ObservedMargins& obs,
                                            const SensitivityParams& params,
                                            int e);

/// The observed conditional risk p(D=1|E=e).
Probability crude_risk(const ObservedMargins& obs, int e);

}  // namespace sharpbounds
