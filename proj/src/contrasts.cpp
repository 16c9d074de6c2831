#include "sharpbounds/contrasts.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace sharpbounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Extended-real ratio of nonnegative values. Indeterminate forms: 0/0, inf/inf.
double ext_ratio(double num, double den) {
  if (std::isinf(num) && std::isinf(den)) throw IndeterminateContrast();
  if (den == 0.0) {
    if (num == 0.0) throw IndeterminateContrast();
    return kInf;
  }
  return num / den;  // finite/inf -> 0, inf/finite -> inf
}

// Extended-real difference. Indeterminate form: inf - inf.
double ext_diff(double a, double b) {
  if (std::isinf(a) && std::isinf(b) && a == b) throw IndeterminateContrast();
  return a - b;
}

// Deterministic pseudo-random unit double for the monotonicity spot-check.
double unit_at(std::uint64_t n) {
  std::uint64_t z = 0x9e3779b97f4a7c15ull * (n + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

// Spot-checks that g is nondecreasing in p1 and nonincreasing in p0 on
// random probability pairs. NaN evaluations (indeterminate forms) skip the
// comparison. This is a screen, not a proof.
void check_monotone(const std::string& name, const ContrastSpec::Evaluator& g) {
  constexpr int kChecks = 128;
  for (int k = 0; k < kChecks; ++k) {
    const double a = unit_at(3 * static_cast<std::uint64_t>(k));
    const double b = unit_at(3 * static_cast<std::uint64_t>(k) + 1);
    const double c = unit_at(3 * static_cast<std::uint64_t>(k) + 2);
    const double p1_lo = std::min(a, b), p1_hi = std::max(a, b);
    const double lo1 = g(p1_lo, c), hi1 = g(p1_hi, c);
    if (!std::isnan(lo1) && !std::isnan(hi1) && lo1 > hi1) {
      throw NonMonotoneContrast("custom contrast '" + name +
                                "' is not nondecreasing in p1");
    }
    const double p0_lo = std::min(a, c), p0_hi = std::max(a, c);
    const double at_lo = g(b, p0_lo), at_hi = g(b, p0_hi);
    if (!std::isnan(at_lo) && !std::isnan(at_hi) && at_lo < at_hi) {
      throw NonMonotoneContrast("custom contrast '" + name +
                                "' is not nonincreasing in p0");
    }
  }
}

std::string kind_name(ContrastKind kind) {
  switch (kind) {
    case ContrastKind::risk_ratio: return "risk_ratio";
    case ContrastKind::risk_difference: return "risk_difference";
    case ContrastKind::odds_ratio: return "odds_ratio";
    case ContrastKind::odds_difference: return "odds_difference";
    case ContrastKind::custom: return "custom";
  }
  return "custom";
}

}  // namespace

double odds(Probability p) {
  const double v = p.value();
  if (v == 1.0) return kInf;
  return v / (1.0 - v);
}

ContrastSpec::ContrastSpec(ContrastKind kind)
    : kind_(kind), name_(kind_name(kind)) {}

ContrastSpec ContrastSpec::custom(std::string name, Evaluator g) {
  if (!g) throw Error("custom contrast requires an evaluator");
  check_monotone(name, g);
  ContrastSpec spec(ContrastKind::custom);
  spec.name_ = std::move(name);
  spec.evaluator_ = std::move(g);
  return spec;
}

ContrastSpec ContrastSpec::from_name(std::string_view name) {
  if (name == "rr" || name == "risk_ratio") return risk_ratio();
  if (name == "rd" || name == "risk_difference") return risk_difference();
  if (name == "or" || name == "odds_ratio") return odds_ratio();
  if (name == "od" || name == "odds_difference") return odds_difference();
  throw ParseError("unknown contrast '" + std::string(name) +
                   "' (expected rr, rd, or, od)");
}

double eval_contrast(const ContrastSpec& spec, Probability p1, Probability p0) {
  switch (spec.kind()) {
    case ContrastKind::risk_ratio:
      return ext_ratio(p1.value(), p0.value());
    case ContrastKind::risk_difference:
      return p1.value() - p0.value();
    case ContrastKind::odds_ratio:
      return ext_ratio(odds(p1), odds(p0));
    case ContrastKind::odds_difference:
      return ext_diff(odds(p1), odds(p0));
    case ContrastKind::custom: {
      const double g = spec.evaluator_(p1.value(), p0.value());
      if (std::isnan(g)) throw IndeterminateContrast();
      return g;
    }
  }
  throw Error("unreachable contrast kind");
}

ContrastInterval contrast_interval(const ObservedMargins& obs,
                                   const SensitivityParams& params,
                                   const ContrastSpec& spec) {
  const ProbabilityInterval p1 = counterfactual_interval(obs, params, 1);
  const ProbabilityInterval p0 = counterfactual_interval(obs, params, 0);
  const double lower = eval_contrast(spec, p1.lower(), p0.upper());
  const double upper = eval_contrast(spec, p1.upper(), p0.lower());
  if (lower > upper) {
    throw NonMonotoneContrast("contrast '" + spec.name() +
                              "' produced an inverted interval; the declared "
                              "monotonicity does not hold");
  }
  return ContrastInterval{lower, upper, spec};
}

GridTable grid(const ObservedMargins& obs, int steps, const ContrastSpec& spec) {
  if (steps < 2) throw Error("grid requires steps >= 2");
  const FeasibleRegion region = feasible_region(obs);
  const double m_star = region.m_star.value();
  const double big_m_star = region.big_m_star.value();

  GridTable table;
  table.contrast = spec;
  table.m_values.reserve(steps);
  table.M_values.reserve(steps);
  for (int k = 0; k < steps; ++k) {
    // Endpoints are the region boundaries bit-exactly.
    const double t = static_cast<double>(k) / (steps - 1);
    table.m_values.push_back(k == steps - 1 ? 0.0 : m_star * (1.0 - t));
    table.M_values.push_back(k == steps - 1
                                 ? 1.0
                                 : big_m_star + (1.0 - big_m_star) * t);
  }

  table.cells.resize(steps);
  for (int i = 0; i < steps; ++i) {
    table.cells[i].reserve(steps);
    for (int j = 0; j < steps; ++j) {
      const SensitivityParams params =
          validate_params(region, table.m_values[i], table.M_values[j]);
      try {
        table.cells[i].push_back(contrast_interval(obs, params, spec));
      } catch (const IndeterminateContrast&) {
        table.cells[i].push_back(std::nullopt);
      }
    }
  }
  return table;
}

}  // namespace sharpbounds
