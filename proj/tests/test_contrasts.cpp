#include <cmath>
#include <limits>
#include <utility>

#include <doctest.h>

#include "sharpbounds/contrasts.hpp"
#include "support.hpp"

using namespace sharpbounds;
using testsupport::near;
using testsupport::TestRng;

namespace {

const ObservedMargins kWorked(0.27, 0.38, 0.49);
constexpr double kInf = std::numeric_limits<double>::infinity();

ContrastInterval at(const ObservedMargins& obs, double m, double big_m,
                    const ContrastSpec& spec) {
  return contrast_interval(obs, validate_params(obs, m, big_m), spec);
}

// Dense-grid oracle: min/max of g over the counterfactual rectangle,
// endpoints included exactly. Returns (min, max) over determinate points.
std::pair<double, double> rect_extrema(const ContrastSpec& spec,
                                       const ProbabilityInterval& p1,
                                       const ProbabilityInterval& p0,
                                       int points) {
  const auto axis = [points](const ProbabilityInterval& i, int k) {
    if (k == points - 1) return i.upper().value();
    return i.lower().value() + i.width() * k / (points - 1);
  };
  double lo = kInf, hi = -kInf;
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < points; ++j) {
      double g;
      try {
        g = eval_contrast(spec, Probability(axis(p1, i)),
                          Probability(axis(p0, j)));
      } catch (const IndeterminateContrast&) {
        continue;
      }
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
  }
  return {lo, hi};
}

}  // namespace

TEST_CASE("odds as an extended real") {
  CHECK(odds(Probability(0.5)) == 1.0);
  CHECK(odds(Probability(0.0)) == 0.0);
  CHECK(odds(Probability(0.8623)) ==
        near(6.262164124909221, 1e-12));
  CHECK(odds(Probability(1.0)) == kInf);
}

TEST_CASE("eval_contrast on the named contrasts") {
  CHECK(eval_contrast(ContrastSpec::risk_difference(), Probability(0.5),
                      Probability(0.5)) == 0.0);
  CHECK(eval_contrast(ContrastSpec::odds_ratio(), Probability(0.49),
                      Probability(0.38)) ==
        near(1.567595459236326, 1e-12));
  CHECK(eval_contrast(ContrastSpec::risk_ratio(), Probability(0.3),
                      Probability(0.0)) == kInf);
  CHECK(eval_contrast(ContrastSpec::risk_ratio(), Probability(0.0),
                      Probability(0.3)) == 0.0);
  CHECK(eval_contrast(ContrastSpec::odds_difference(), Probability(1.0),
                      Probability(0.5)) == kInf);
}

TEST_CASE("indeterminate forms throw, infinite values do not") {
  const Probability zero(0.0), one(1.0), half(0.5);
  CHECK_THROWS_AS(eval_contrast(ContrastSpec::risk_ratio(), zero, zero),
                  IndeterminateContrast);
  CHECK_THROWS_AS(eval_contrast(ContrastSpec::odds_ratio(), one, one),
                  IndeterminateContrast);
  CHECK_THROWS_AS(eval_contrast(ContrastSpec::odds_difference(), one, one),
                  IndeterminateContrast);
  CHECK_THROWS_AS(eval_contrast(ContrastSpec::odds_ratio(), zero, zero),
                  IndeterminateContrast);
  CHECK(eval_contrast(ContrastSpec::odds_ratio(), one, half) == kInf);
  CHECK(eval_contrast(ContrastSpec::odds_ratio(), half, one) == 0.0);
  CHECK(eval_contrast(ContrastSpec::odds_difference(), half, one) == -kInf);
}

TEST_CASE("contrast names parse and round-trip") {
  CHECK(ContrastSpec::from_name("rr").kind() == ContrastKind::risk_ratio);
  CHECK(ContrastSpec::from_name("rd").kind() == ContrastKind::risk_difference);
  CHECK(ContrastSpec::from_name("or").kind() == ContrastKind::odds_ratio);
  CHECK(ContrastSpec::from_name("od").kind() == ContrastKind::odds_difference);
  CHECK(ContrastSpec::from_name("risk_ratio").name() == "risk_ratio");
  CHECK_THROWS_AS(ContrastSpec::from_name("hazard"), ParseError);
}

TEST_CASE("contrast intervals at the region corners of the worked margins") {
  const ContrastInterval rr = at(kWorked, 0.0, 1.0, ContrastSpec::risk_ratio());
  CHECK(rr.lower == near(0.24168797953964194, 1e-12));
  CHECK(rr.upper == near(3.108507570295602, 1e-12));

  const ContrastInterval rd =
      at(kWorked, 0.0, 1.0, ContrastSpec::risk_difference());
  CHECK(rd.lower == near(-0.4151, 1e-12));
  CHECK(rd.upper == near(0.5849, 1e-12));

  const ContrastInterval orc =
      at(kWorked, 0.38, 0.49, ContrastSpec::odds_ratio());
  CHECK(orc.lower == near(1.0, 1e-12));
  CHECK(orc.upper == near(1.567595459236326, 1e-12));

  const ContrastInterval od =
      at(kWorked, 0.0, 1.0, ContrastSpec::odds_difference());
  CHECK(od.lower == near(-1.0569844211547423, 1e-12));
  CHECK(od.upper == near(5.878272622003049, 1e-12));
}

TEST_CASE("custom contrasts are accepted when monotone and rejected when not") {
  const ContrastSpec log_rr = ContrastSpec::custom(
      "log_risk_ratio", [](double p1, double p0) {
        if (p1 == 0.0 && p0 == 0.0) return std::nan("");
        if (p0 == 0.0) return kInf;
        if (p1 == 0.0) return -kInf;
        return std::log(p1 / p0);
      });
  CHECK(log_rr.name() == "log_risk_ratio");
  CHECK(log_rr.kind() == ContrastKind::custom);
  const ContrastInterval i = at(kWorked, 0.0, 1.0, log_rr);
  CHECK(i.lower == near(std::log(0.24168797953964194), 1e-12));
  CHECK(i.upper == near(std::log(3.108507570295602), 1e-12));

  CHECK_THROWS_AS(
      ContrastSpec::custom("backwards", [](double p1, double p0) { return p0 - p1; }),
      NonMonotoneContrast);
  CHECK_THROWS_AS(
      ContrastSpec::custom("bump", [](double p1, double) { return -(p1 - 0.5) * (p1 - 0.5); }),
      NonMonotoneContrast);
  // evaluator returning NaN at the evaluation point surfaces as indeterminate
  const ContrastSpec sometimes = ContrastSpec::custom(
      "sometimes", [](double p1, double p0) {
        return (p1 > 0.4 && p1 < 0.6) ? std::nan("") : p1 - p0;
      });
  CHECK_THROWS_AS(eval_contrast(sometimes, Probability(0.5), Probability(0.1)),
                  IndeterminateContrast);
}

TEST_CASE("difference contrasts contain zero, ratio contrasts contain one") {
  TestRng rng(404);
  for (int k = 0; k < 1000; ++k) {
    const auto [obs, params] = testsupport::random_feasible(rng);
    const ContrastInterval rd =
        contrast_interval(obs, params, ContrastSpec::risk_difference());
    CHECK(rd.contains(0.0));
    const ContrastInterval od =
        contrast_interval(obs, params, ContrastSpec::odds_difference());
    CHECK(od.contains(0.0));
    const ContrastInterval rr =
        contrast_interval(obs, params, ContrastSpec::risk_ratio());
    CHECK(rr.contains(1.0));
    const ContrastInterval orc =
        contrast_interval(obs, params, ContrastSpec::odds_ratio());
    CHECK(orc.contains(1.0));
  }
}

TEST_CASE("the crude contrast lies inside the interval") {
  TestRng rng(505);
  const ContrastSpec specs[] = {
      ContrastSpec::risk_ratio(), ContrastSpec::risk_difference(),
      ContrastSpec::odds_ratio(), ContrastSpec::odds_difference()};
  for (int k = 0; k < 300; ++k) {
    const auto [obs, params] = testsupport::random_feasible(rng);
    for (const ContrastSpec& spec : specs) {
      const double crude =
          eval_contrast(spec, crude_risk(obs, 1), crude_risk(obs, 0));
      const ContrastInterval i = contrast_interval(obs, params, spec);
      CHECK(i.lower <= crude + 1e-12);
      CHECK(crude <= i.upper + 1e-12);
    }
  }
}

TEST_CASE("widening the parameter rectangle never narrows the interval") {
  TestRng rng(606);
  const ContrastSpec specs[] = {
      ContrastSpec::risk_ratio(), ContrastSpec::risk_difference(),
      ContrastSpec::odds_ratio(), ContrastSpec::odds_difference()};
  for (int k = 0; k < 300; ++k) {
    const ObservedMargins obs = testsupport::random_margins(rng);
    const FeasibleRegion region = feasible_region(obs);
    const double m1 = rng.in(0.0, region.m_star.value());
    const double m2 = rng.in(0.0, m1);
    const double M1 = rng.in(region.big_m_star.value(), 1.0);
    const double M2 = rng.in(M1, 1.0);
    for (const ContrastSpec& spec : specs) {
      const ContrastInterval inner = at(obs, m1, M1, spec);
      const ContrastInterval outer = at(obs, m2, M2, spec);
      CHECK(outer.lower <= inner.lower + 1e-12);
      CHECK(inner.upper <= outer.upper + 1e-12);
    }
  }
}

TEST_CASE("corner rule matches dense-grid extrema over the rectangle") {
  TestRng rng(707);
  const ContrastSpec specs[] = {
      ContrastSpec::risk_ratio(), ContrastSpec::risk_difference(),
      ContrastSpec::odds_ratio(), ContrastSpec::odds_difference(),
      ContrastSpec::custom("scaled_difference",
                           [](double p1, double p0) { return 2.0 * p1 - 3.0 * p0; })};
  for (int k = 0; k < 60; ++k) {
    const auto [obs, params] = testsupport::random_feasible(rng);
    const ProbabilityInterval p1 = counterfactual_interval(obs, params, 1);
    const ProbabilityInterval p0 = counterfactual_interval(obs, params, 0);
    for (const ContrastSpec& spec : specs) {
      const ContrastInterval i = contrast_interval(obs, params, spec);
      const auto [lo, hi] = rect_extrema(spec, p1, p0, 60);
      const bool is_odds = spec.kind() == ContrastKind::odds_ratio ||
                           spec.kind() == ContrastKind::odds_difference;
      const double tol_lo =
          is_odds ? std::max(1e-6, 1e-3 * std::abs(i.lower)) : 1e-6;
      const double tol_hi =
          is_odds ? std::max(1e-6, 1e-3 * std::abs(i.upper)) : 1e-6;
      CHECK(std::abs(lo - i.lower) <= tol_lo);
      CHECK(std::abs(hi - i.upper) <= tol_hi);
    }
  }
}

TEST_CASE("grid axes sweep the feasible region with exact endpoints") {
  const GridTable t = grid(kWorked, 5, ContrastSpec::risk_ratio());
  REQUIRE(t.m_values.size() == 5);
  REQUIRE(t.M_values.size() == 5);
  // endpoints land on the region boundaries bit-exactly
  CHECK(t.m_values.front() == 0.38);
  CHECK(t.m_values.back() == 0.0);
  CHECK(t.M_values.front() == 0.49);
  CHECK(t.M_values.back() == 1.0);
  // interior points are linearly spaced, not display-rounded
  CHECK(t.m_values[1] == near(0.285, 1e-15));
  CHECK(t.m_values[2] == near(0.19, 1e-15));
  CHECK(t.m_values[3] == near(0.095, 1e-15));
  CHECK(t.M_values[1] == near(0.6175, 1e-15));
  CHECK(t.M_values[2] == near(0.745, 1e-15));
  CHECK(t.M_values[3] == near(0.8725, 1e-15));
  // the cell at (m*, second M value) separates exact from rounded axes:
  // 1.534 at M=0.6175 vs 1.539 at M=0.62
  REQUIRE(t.cells[0][1].has_value());
  CHECK(t.cells[0][1]->upper ==
        near(1.534407894736842, 1e-12));

  const GridTable corners = grid(kWorked, 2, ContrastSpec::risk_difference());
  CHECK(corners.m_values == std::vector<double>{0.38, 0.0});
  CHECK(corners.M_values == std::vector<double>{0.49, 1.0});
  REQUIRE(corners.cells.size() == 2);
  REQUIRE(corners.cells[0].size() == 2);
  CHECK(corners.cells[1][1]->lower == near(-0.4151, 1e-12));
  CHECK(corners.cells[1][1]->upper == near(0.5849, 1e-12));
}

TEST_CASE("grid cells agree with pointwise contrast intervals") {
  TestRng rng(808);
  for (int k = 0; k < 20; ++k) {
    const ObservedMargins obs = testsupport::random_margins(rng);
    const GridTable t = grid(obs, 4, ContrastSpec::odds_ratio());
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        REQUIRE(t.cells[i][j].has_value());
        const ContrastInterval direct =
            at(obs, t.m_values[i], t.M_values[j], ContrastSpec::odds_ratio());
        CHECK(t.cells[i][j]->lower == direct.lower);
        CHECK(t.cells[i][j]->upper == direct.upper);
      }
    }
  }
}

TEST_CASE("grid marks indeterminate cells instead of failing") {
  // Both risks 1 pins M at 1 and the upper interval endpoints at 1, so the
  // m = 1 row hits odds(1)/odds(1) = inf/inf; rows with m < 1 stay defined
  // with a 0 lower and an infinite upper endpoint.
  const ObservedMargins degenerate(0.5, 1.0, 1.0);
  const GridTable t = grid(degenerate, 3, ContrastSpec::odds_ratio());
  REQUIRE(t.m_values.size() == 3);
  CHECK(t.m_values[0] == 1.0);
  CHECK(t.m_values[2] == 0.0);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(t.M_values[j] == 1.0);
    CHECK_FALSE(t.cells[0][j].has_value());
    for (std::size_t i = 1; i < 3; ++i) {
      REQUIRE(t.cells[i][j].has_value());
      CHECK(t.cells[i][j]->lower == 0.0);
      CHECK(t.cells[i][j]->upper == kInf);
    }
  }
  // Differences stay finite everywhere: [(m - 1) / 2, (1 - m) / 2].
  const GridTable fine = grid(degenerate, 3, ContrastSpec::risk_difference());
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      REQUIRE(fine.cells[i][j].has_value());
      CHECK(fine.cells[i][j]->lower == 0.5 * (fine.m_values[i] - 1.0));
      CHECK(fine.cells[i][j]->upper == 0.5 * (1.0 - fine.m_values[i]));
    }
  }
  CHECK_THROWS_AS(grid(kWorked, 1, ContrastSpec::risk_ratio()), Error);
}

TEST_CASE("inverted interval from a falsely declared monotone contrast") {
  // Monotone except in a pocket too small for the construction-time screen,
  // placed exactly where this rectangle's lower corner lands (0.4097, 0.4097).
  // Whichever stage notices must refuse rather than return lower > upper.
  CHECK_THROWS_AS(
      at(kWorked, 0.38, 0.49,
         ContrastSpec::custom(
             "sneaky",
             [](double p1, double p0) {
               const bool inside =
                   p1 > 0.409 && p1 < 0.41 && p0 > 0.409 && p0 < 0.41;
               return inside ? 1.0 - p1 : p1 - p0;
             })),
      NonMonotoneContrast);
}
