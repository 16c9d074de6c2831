#pragma once

#include <array>
#include <utility>

#include "sharpbounds/core.hpp"

namespace sharpbounds {

/// Which pair of bounds the witness is built to attain. The two bounds of a
/// pair are approached simultaneously by a single model.
enum class WitnessTarget {
  lower_p1_upper_p0,  // attains the lower bound of p(D_1=1) and the upper of p(D_0=1)
  upper_p1_lower_p0,  // attains the upper bound of p(D_1=1) and the lower of p(D_0=1)
};

/// An explicit joint distribution p(D,E,U) with binary confounder U that
/// realizes a pair of bounds up to a slack of order epsilon. U is tied to E
/// by p(U=1|E=1) = p(U=0|E=0) = 1-epsilon with 0 < epsilon < 1, which keeps
/// every p(U=u|E=e) positive.
struct WitnessModel {
  Probability p_e1;
  double epsilon;
  /// cond[e][u] = p(D=1 | E=e, U=u)
  std::array<std::array<Probability, 2>, 2> cond;

  /// p(U=1|E=1) = p(U=0|E=0)
  double u_given_e() const { return 1.0 - epsilon; }
  /// p(U=1|E=e)
  double p_u1_given_e(int e) const { return e == 1 ? 1.0 - epsilon : epsilon; }
};

/// Builds the bound-attaining model for (obs, params). For the
/// lower_p1_upper_p0 target the conditional table is
///   cond[1][1] = p(D=1|E=1),  cond[1][0] = m,
///   cond[0][1] = M,           cond[0][0] = p(D=1|E=0);
/// the upper_p1_lower_p0 target swaps the two off-diagonal cells
/// (cond[1][0] = M, cond[0][1] = m). Throws EpsilonOutOfRange unless
/// 0 < epsilon < 1; params must be feasible for obs.
WitnessModel build_witness(const ObservedMargins& obs,
                           const SensitivityParams& params,
                           WitnessTarget target, double epsilon);

/// Marginalizes the witness over U: p(D=1|E=e) = sum_u cond[e][u] p(U=u|E=e),
/// p(E=1) unchanged. Drifts from the generating margins by at most
/// epsilon*(M-m) per arm.
ObservedMargins implied_margins(const WitnessModel& w);

/// (min, max) over the four conditional cells. For a witness built from
/// feasible params these equal the generating (m, M) exactly.
std::pair<Probability, Probability> implied_extrema(const WitnessModel& w);

/// The counterfactual probability p(D_e=1) the witness actually induces:
/// p(D_e=1|E=1-e) = sum_u cond[e][u] p(U=u|E=1-e), combined with the
/// witness's own implied margins.
Probability exact_counterfactual(const WitnessModel& w, int e);

struct SharpnessReport {
  double gap_p1;        // |targeted bound of p(D_1=1) - exact p(D_1=1)|
  double gap_p0;        // same for p(D_0=1)
  double margin_drift;  // max_e |implied - generating p(D=1|E=e)|
};

/// Builds the witness and measures how closely it attains the targeted
/// bounds. The bounds are computed from the witness's *implied* margins, so
/// the gaps isolate bound attainment from the epsilon-induced margin drift,
/// which is reported separately. All three quantities vanish as epsilon -> 0.
SharpnessReport sharpness_gap(const ObservedMargins& obs,
                              const SensitivityParams& params,
                              WitnessTarget target, double epsilon);

}  // namespace sharpbounds
