#include "sharpbounds/witness.hpp"

#include <algorithm>
#include <cmath>

#include "sharpbounds/detail/format.hpp"

namespace sharpbounds {

EpsilonOutOfRange::EpsilonOutOfRange(double epsilon)
    : Error("epsilon must lie strictly inside (0, 1), got " +
            detail::fmt_shortest(epsilon)),
      epsilon(epsilon) {}

WitnessModel build_witness(const ObservedMargins& obs,
                           const SensitivityParams& params,
                           WitnessTarget target, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw EpsilonOutOfRange(epsilon);
  // Revalidate; the construction below only attains (m, M) as the table
  // extrema when the pair is feasible for these margins.
  validate_params(obs, params.m().value(), params.big_m().value());

  WitnessModel w;
  w.p_e1 = obs.p_e1();
  w.epsilon = epsilon;
  w.cond[1][1] = obs.p_d1_e1();
  w.cond[0][0] = obs.p_d1_e0();
  if (target == WitnessTarget::lower_p1_upper_p0) {
    w.cond[1][0] = params.m();
    w.cond[0][1] = params.big_m();
  } else {
    w.cond[1][0] = params.big_m();
    w.cond[0][1] = params.m();
  }
  return w;
}

ObservedMargins implied_margins(const WitnessModel& w) {
  const double eps = w.epsilon;
  const double p_d1_e1 =
      (1.0 - eps) * w.cond[1][1].value() + eps * w.cond[1][0].value();
  const double p_d1_e0 =
      (1.0 - eps) * w.cond[0][0].value() + eps * w.cond[0][1].value();
  return ObservedMargins(w.p_e1, Probability(p_d1_e0), Probability(p_d1_e1));
}

std::pair<Probability, Probability> implied_extrema(const WitnessModel& w) {
  double lo = w.cond[0][0].value();
  double hi = lo;
  for (int e = 0; e < 2; ++e) {
    for (int u = 0; u < 2; ++u) {
      lo = std::min(lo, w.cond[e][u].value());
      hi = std::max(hi, w.cond[e][u].value());
    }
  }
  return {Probability(lo), Probability(hi)};
}

Probability exact_counterfactual(const WitnessModel& w, int e) {
  // p(D_e=1 | E=1-e) = sum_u p(D=1|E=e,U=u) p(U=u|E=1-e)
  const double p_u1_other = w.p_u1_given_e(1 - e);
  const double cross = w.cond[e][1].value() * p_u1_other +
                       w.cond[e][0].value() * (1.0 - p_u1_other);
  // p(D_e=1 | E=e) = p(D=1|E=e) under the witness's own margins
  const double p_u1_own = w.p_u1_given_e(e);
  const double own = w.cond[e][1].value() * p_u1_own +
                     w.cond[e][0].value() * (1.0 - p_u1_own);
  const double p_e = e == 1 ? w.p_e1.value() : 1.0 - w.p_e1.value();
  return Probability(own * p_e + cross * (1.0 - p_e));
}

SharpnessReport sharpness_gap(const ObservedMargins& obs,
                              const SensitivityParams& params,
                              WitnessTarget target, double epsilon) {
  const WitnessModel w = build_witness(obs, params, target, epsilon);
  const ObservedMargins implied = implied_margins(w);

  const ProbabilityInterval i1 = counterfactual_interval(implied, params, 1);
  const ProbabilityInterval i0 = counterfactual_interval(implied, params, 0);
  const bool lower_p1 = target == WitnessTarget::lower_p1_upper_p0;
  const double bound_p1 = lower_p1 ? i1.lower().value() : i1.upper().value();
  const double bound_p0 = lower_p1 ? i0.upper().value() : i0.lower().value();

  SharpnessReport report;
  report.gap_p1 = std::abs(bound_p1 - exact_counterfactual(w, 1).value());
  report.gap_p0 = std::abs(bound_p0 - exact_counterfactual(w, 0).value());
  report.margin_drift = std::max(
      std::abs(implied.p_d1_e1().value() - obs.p_d1_e1().value()),
      std::abs(implied.p_d1_e0().value() - obs.p_d1_e0().value()));
  return report;
}

}  // namespace sharpbounds
