#include <cmath>

#include <doctest.h>

#include "sharpbounds/core.hpp"
#include "support.hpp"

using namespace sharpbounds;
using testsupport::near;
using testsupport::TestRng;

namespace {
const ObservedMargins kWorked(0.27, 0.38, 0.49);
}

TEST_CASE("probability construction validates the unit range") {
  CHECK(Probability(0.0).value() == 0.0);
  CHECK(Probability(1.0).value() == 1.0);
  CHECK(Probability(0.38).value() == 0.38);
  // within tolerance: clamped onto [0, 1]
  CHECK(Probability(1.0 + 1e-13).value() == 1.0);
  CHECK(Probability(-1e-13).value() == 0.0);
  CHECK_THROWS_AS(Probability(1.0 + 1e-11), InvalidProbability);
  CHECK_THROWS_AS(Probability(-0.1), InvalidProbability);
  CHECK_THROWS_AS(Probability(std::nan("")), InvalidProbability);
  try {
    Probability(1.5);
  } catch (const InvalidProbability& e) {
    CHECK(e.value == 1.5);
  }
}

TEST_CASE("observed margins require both exposure arms") {
  CHECK_NOTHROW(ObservedMargins(0.27, 0.38, 0.49));
  CHECK_THROWS_AS(ObservedMargins(0.0, 0.38, 0.49), Error);
  CHECK_THROWS_AS(ObservedMargins(1.0, 0.38, 0.49), Error);
  CHECK_THROWS_AS(ObservedMargins(1.2, 0.38, 0.49), InvalidProbability);
}

TEST_CASE("derived joint cells are consistent") {
  CHECK(kWorked.p_e(1) == 0.27);
  CHECK(kWorked.p_e(0) == near(0.73, 1e-15));
  CHECK(kWorked.p_d1_given_e(1) == 0.49);
  CHECK(kWorked.p_d1_given_e(0) == 0.38);
  CHECK(kWorked.p_d1_and_e(1) == near(0.1323, 1e-15));
  CHECK(kWorked.p_d1_and_e(0) == near(0.2774, 1e-15));
  // p(D=d, E=e) over all four cells sums to one
  const double total = kWorked.p_d1_and_e(0) + kWorked.p_d1_and_e(1) +
                       (1 - kWorked.p_d1_given_e(0)) * kWorked.p_e(0) +
                       (1 - kWorked.p_d1_given_e(1)) * kWorked.p_e(1);
  CHECK(total == near(1.0, 1e-14));
}

TEST_CASE("feasible region is the min and max conditional risk") {
  const FeasibleRegion r = feasible_region(kWorked);
  CHECK(r.m_star.value() == 0.38);
  CHECK(r.big_m_star.value() == 0.49);

  const FeasibleRegion equal = feasible_region(ObservedMargins(0.5, 0.3, 0.3));
  CHECK(equal.m_star.value() == 0.3);
  CHECK(equal.big_m_star.value() == 0.3);

  const FeasibleRegion extreme = feasible_region(ObservedMargins(0.5, 0.0, 1.0));
  CHECK(extreme.m_star.value() == 0.0);
  CHECK(extreme.big_m_star.value() == 1.0);
}

TEST_CASE("validate_params accepts interior and boundary pairs") {
  CHECK_NOTHROW(validate_params(kWorked, 0.1, 0.87));
  CHECK_NOTHROW(validate_params(kWorked, 0.38, 0.49));
  CHECK_NOTHROW(validate_params(kWorked, 0.0, 1.0));
  // tolerance: barely-outside values are clamped onto the region
  const SensitivityParams clamped = validate_params(kWorked, 0.38 + 1e-10, 1.0);
  CHECK(clamped.m().value() == 0.38);
  const SensitivityParams clamped_m = validate_params(kWorked, 0.0, 0.49 - 1e-10);
  CHECK(clamped_m.big_m().value() == 0.49);
}

TEST_CASE("validate_params rejects each violation with its boundary") {
  try {
    validate_params(kWorked, 0.5, 1.0);
    FAIL("expected InfeasibleSmallM");
  } catch (const InfeasibleSmallM& e) {
    CHECK(e.m == 0.5);
    CHECK(e.boundary == 0.38);
    CHECK(std::string(e.what()).find("m must lie in [0, 0.38]") !=
          std::string::npos);
  }
  try {
    validate_params(kWorked, -0.2, 1.0);
    FAIL("expected InfeasibleSmallM");
  } catch (const InfeasibleSmallM& e) {
    CHECK(e.boundary == 0.0);
  }
  try {
    validate_params(kWorked, 0.0, 0.4);
    FAIL("expected InfeasibleM");
  } catch (const InfeasibleM& e) {
    CHECK(e.big_m == 0.4);
    CHECK(e.boundary == 0.49);
    CHECK(std::string(e.what()).find("M must lie in [0.49, 1]") !=
          std::string::npos);
  }
  try {
    validate_params(kWorked, 0.0, 1.2);
    FAIL("expected InfeasibleM");
  } catch (const InfeasibleM& e) {
    CHECK(e.boundary == 1.0);
  }
  CHECK_THROWS_AS(validate_params(ObservedMargins(0.5, 0.2, 0.8), 0.2, 0.1),
                  InvertedParams);
  // the infeasibility family shares a base
  CHECK_THROWS_AS(validate_params(kWorked, 0.5, 1.0), InfeasibleParams);
}

TEST_CASE("counterfactual intervals at the noninformative pair") {
  const SensitivityParams params = validate_params(kWorked, 0.0, 1.0);
  const ProbabilityInterval p1 = counterfactual_interval(kWorked, params, 1);
  CHECK(p1.lower().value() == near(0.1323, 1e-12));
  CHECK(p1.upper().value() == near(0.8623, 1e-12));
  CHECK(p1.exposure_level() == 1);
  const ProbabilityInterval p0 = counterfactual_interval(kWorked, params, 0);
  CHECK(p0.lower().value() == near(0.2774, 1e-12));
  CHECK(p0.upper().value() == near(0.5474, 1e-12));
  CHECK(p0.exposure_level() == 0);
}

TEST_CASE("equal risks and a point parameter pair give a point interval") {
  const ObservedMargins obs(0.4, 0.25, 0.25);
  const SensitivityParams params = validate_params(obs, 0.25, 0.25);
  for (int e : {0, 1}) {
    const ProbabilityInterval i = counterfactual_interval(obs, params, e);
    CHECK(i.lower().value() == i.upper().value());
    CHECK(i.lower().value() == near(0.25, 1e-12));
  }
}

TEST_CASE("counterfactual_interval rejects infeasible parameters") {
  const ObservedMargins other(0.5, 0.1, 0.2);
  // feasible for `other` (m* = 0.1) but not for the worked margins
  const SensitivityParams params = validate_params(other, 0.05, 1.0);
  CHECK_NOTHROW(counterfactual_interval(kWorked, params, 1));  // 0.05 < 0.38
  const SensitivityParams too_low_m = validate_params(other, 0.0, 0.3);
  CHECK_THROWS_AS(counterfactual_interval(kWorked, too_low_m, 1), InfeasibleM);
}

TEST_CASE("crude risk returns the stored conditional") {
  CHECK(crude_risk(kWorked, 1).value() == 0.49);
  CHECK(crude_risk(kWorked, 0).value() == 0.38);
  CHECK(crude_risk(ObservedMargins(0.5, 0.3, 0.0), 1).value() == 0.0);
}

TEST_CASE("noninformative pair recovers the assumption-free interval") {
  TestRng rng(101);
  for (int k = 0; k < 200; ++k) {
    const ObservedMargins obs = testsupport::random_margins(rng);
    const SensitivityParams params = validate_params(obs, 0.0, 1.0);
    for (int e : {0, 1}) {
      const ProbabilityInterval i = counterfactual_interval(obs, params, e);
      const double joint = obs.p_d1_given_e(e) * obs.p_e(e);
      const double other = obs.p_e(1 - e);
      CHECK(std::abs(i.lower().value() - joint) <= 1e-12);
      CHECK(std::abs(i.upper().value() - (joint + other)) <= 1e-12);
    }
  }
}

TEST_CASE("interval validity, width identity and crude containment") {
  TestRng rng(202);
  for (int k = 0; k < 500; ++k) {
    const auto [obs, params] = testsupport::random_feasible(rng);
    for (int e : {0, 1}) {
      const ProbabilityInterval i = counterfactual_interval(obs, params, e);
      CHECK(i.lower().value() <= i.upper().value());
      CHECK(i.lower().value() >= 0.0);
      CHECK(i.upper().value() <= 1.0);
      const double width_expected =
          obs.p_e(1 - e) * (params.big_m().value() - params.m().value());
      CHECK(std::abs(i.width() - width_expected) <= 1e-12);
      CHECK(i.contains(obs.p_d1_given_e(e), 1e-12));
    }
  }
}

TEST_CASE("lower grows with m, upper grows with M, independently") {
  TestRng rng(303);
  for (int k = 0; k < 300; ++k) {
    const ObservedMargins obs = testsupport::random_margins(rng);
    const FeasibleRegion region = feasible_region(obs);
    const double m_star = region.m_star.value();
    const double big_m_star = region.big_m_star.value();
    const double m_a = rng.in(0.0, m_star), m_b = rng.in(0.0, m_star);
    const double M_a = rng.in(big_m_star, 1.0), M_b = rng.in(big_m_star, 1.0);
    const double m_lo = std::min(m_a, m_b), m_hi = std::max(m_a, m_b);
    const double M_lo = std::min(M_a, M_b), M_hi = std::max(M_a, M_b);
    for (int e : {0, 1}) {
      const auto at = [&](double m, double M) {
        return counterfactual_interval(obs, validate_params(region, m, M), e);
      };
      CHECK(at(m_lo, M_lo).lower().value() <= at(m_hi, M_lo).lower().value());
      CHECK(at(m_lo, M_lo).upper().value() <= at(m_lo, M_hi).upper().value());
      // lower ignores M; upper ignores m
      CHECK(at(m_lo, M_lo).lower().value() == at(m_lo, M_hi).lower().value());
      CHECK(at(m_lo, M_lo).upper().value() == at(m_hi, M_lo).upper().value());
    }
  }
}

TEST_CASE("interval containment query applies the tolerance") {
  const SensitivityParams params = validate_params(kWorked, 0.1, 0.87);
  const ProbabilityInterval i = counterfactual_interval(kWorked, params, 1);
  CHECK(i.contains(i.lower().value()));
  CHECK(i.contains(i.upper().value()));
  CHECK_FALSE(i.contains(i.lower().value() - 1e-6));
  CHECK(i.contains(i.lower().value() - 1e-6, 1e-5));
}
