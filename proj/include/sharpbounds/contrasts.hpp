#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sharpbounds/core.hpp"

namespace sharpbounds {

enum class ContrastKind {
  risk_ratio,
  risk_difference,
  odds_ratio,
  odds_difference,
  custom,
};

/// odds(p) = p / (1 - p) as an extended real; odds(1) = +inf.
double odds(Probability p);

/// Identifies a contrast g(p1, p0) between the counterfactual probabilities
/// p(D_1=1) and p(D_0=1). Every contrast handled here is monotone
/// nondecreasing in p1 and nonincreasing in p0; that is what makes the
/// corner combination rule in contrast_interval() valid. Custom evaluators
/// are spot-checked for this monotonicity at construction and rejected with
/// NonMonotoneContrast if a violation is found.
class ContrastSpec {
 public:
  /// Extended-real evaluator. Return +/-inf for infinite values and NaN for
  /// indeterminate forms.
  using Evaluator = std::function<double(double p1, double p0)>;

  ContrastSpec() : ContrastSpec(ContrastKind::risk_difference) {}

  static ContrastSpec risk_ratio() { return ContrastSpec(ContrastKind::risk_ratio); }
  static ContrastSpec risk_difference() { return ContrastSpec(ContrastKind::risk_difference); }
  static ContrastSpec odds_ratio() { return ContrastSpec(ContrastKind::odds_ratio); }
  static ContrastSpec odds_difference() { return ContrastSpec(ContrastKind::odds_difference); }
  static ContrastSpec custom(std::string name, Evaluator g);

  /// Accepts "rr", "rd", "or", "od" and the full kind names.
  static ContrastSpec from_name(std::string_view name);

  ContrastKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

 private:
  explicit ContrastSpec(ContrastKind kind);

  ContrastKind kind_;
  std::string name_;
  Evaluator evaluator_;  // only set for custom

  friend double eval_contrast(const ContrastSpec&, Probability, Probability);
};

/// Evaluates g(p1, p0) as an extended real. Ratio contrasts return +inf for
/// a positive numerator over a zero denominator; the indeterminate forms
/// 0/0, inf/inf and inf-inf throw IndeterminateContrast.
double eval_contrast(const ContrastSpec& spec, Probability p1, Probability p0);

/// Bounds (lower, upper) on a contrast, extended-real valued.
struct ContrastInterval {
  double lower;
  double upper;
  ContrastSpec contrast;

  bool contains(double x) const { return lower <= x && x <= upper; }
};

/// Sharp contrast bounds by the monotone corner rule:
///   lower = g(LB_1, UB_0), upper = g(UB_1, LB_0)
/// with (LB_e, UB_e) = counterfactual_interval(obs, params, e).
ContrastInterval contrast_interval(const ObservedMargins& obs,
                                   const SensitivityParams& params,
                                   const ContrastSpec& spec);

/// Contrast bounds over a grid of sensitivity-parameter values. Rows sweep m
/// descending from m* to 0, columns sweep M ascending from M* to 1, both
/// with exact linear spacing (axis endpoints hit the region boundaries
/// bit-exactly). A cell that evaluates to an indeterminate form is left
/// empty rather than failing the table.
struct GridTable {
  std::vector<double> m_values;  // descending: m* .. 0
  std::vector<double> M_values;  // ascending:  M* .. 1
  std::vector<std::vector<std::optional<ContrastInterval>>> cells;  // [m][M]
  ContrastSpec contrast;
};

/// steps >= 2 points per axis.
GridTable grid(const ObservedMargins& obs, int steps, const ContrastSpec& spec);

}  // namespace sharpbounds
