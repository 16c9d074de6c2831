#pragma once

#include <cstdint>
#include <vector>

#include "sharpbounds/contrasts.hpp"
#include "sharpbounds/core.hpp"

namespace sharpbounds {

/// Counter-addressable random stream (splitmix64). The value at counter n
/// depends only on (seed, n), so any sample index can derive its own draws
/// without touching shared state; parallel and sequential runs consume
/// identical randomness.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  std::uint64_t next_u64();
  /// Uniform draw in the open interval (0, 1).
  double next_unit_open();

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

/// Standard normal CDF.
double normal_cdf(double x);
/// Standard normal quantile for p in (0,1). Rational approximation polished
/// with one Halley step; accurate to near machine precision.
double normal_quantile(double p);

/// An analyst-specified distribution for one sensitivity parameter. The
/// support is not stored here: it is bound to the feasible region of the
/// margins at run time ((0, m*) for m, (M*, 1) for M).
struct ParamDistribution {
  enum class Kind { point_mass, uniform, truncated_normal };

  Kind kind = Kind::uniform;
  double value = 0.0;     // point_mass
  double mean = 0.0;      // truncated_normal; NaN = use the support midpoint
  double variance = 0.0;  // truncated_normal, variance of the untruncated normal

  static ParamDistribution point(double v);
  static ParamDistribution uniform();
  static ParamDistribution truncated_normal(double mean, double variance);
  /// Truncated normal centered at the support midpoint.
  static ParamDistribution truncated_normal_auto(double variance = 0.1);
};

/// A ParamDistribution bound to its feasible interval. Continuous kinds draw
/// strictly inside the open interval (lo, hi); a point mass may sit anywhere
/// in the closed interval. Throws DegenerateSupport when a continuous kind
/// is bound to a zero-length interval, InfeasibleParams when a point mass
/// lies outside. Truncated-normal draws invert the CDF on the truncated
/// range; there is no rejection step, so every draw consumes exactly one
/// uniform.
class BoundDistribution {
 public:
  static BoundDistribution bind(const ParamDistribution& dist, double lo, double hi);

  double sample(CounterRng& stream) const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const ParamDistribution& spec() const { return spec_; }

 private:
  ParamDistribution spec_;
  double lo_ = 0.0, hi_ = 0.0;
  double sigma_ = 0.0, cdf_lo_ = 0.0, cdf_hi_ = 0.0;  // truncated_normal
};

/// One draw strictly inside the support. Consumes exactly one uniform from
/// the stream regardless of kind.
double sample_param(const BoundDistribution& dist, CounterRng& stream);

struct McConfig {
  std::uint64_t n_samples = 100000;
  std::uint64_t seed = 0;
  ParamDistribution m_dist = ParamDistribution::truncated_normal_auto();
  ParamDistribution big_m_dist = ParamDistribution::uniform();
  ContrastSpec contrast;
  int histogram_bins = 50;
};

struct Quantiles {
  double q01, q05, q25, q50, q75, q95, q99;
};

/// Distribution summary for one bound (lower or upper) of the contrast.
/// Moments and the histogram cover finite samples; quantiles and the
/// empirical CDF cover all determinate samples (infinities sort to the
/// ends). Indeterminate samples are counted in McSummary::n_indeterminate.
struct BoundSummary {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n-1); 0 when n < 2
  Quantiles quantiles{};
  std::vector<double> hist_edges;           // histogram_bins + 1
  std::vector<std::uint64_t> hist_counts;   // histogram_bins
  std::vector<double> sorted_samples;       // ascending, may contain +/-inf
  std::uint64_t n_infinite = 0;

  /// Empirical P(bound <= x).
  double prob_leq(double x) const;
};

struct McSummary {
  std::uint64_t n_samples = 0;
  std::uint64_t n_indeterminate = 0;
  BoundSummary lower, upper;
};

/// The deterministic draw for one sample index: sample i reads stream
/// counters {2i, 2i+1} (m first, then M).
struct McDraw {
  double m, big_m;
  double lower, upper;   // meaningful only when !indeterminate
  bool indeterminate;
};
McDraw mc_draw(const ObservedMargins& obs, const McConfig& config,
               std::uint64_t index);

/// Runs the simulation: per sample, draw (m_i, M_i), compute the contrast
/// interval, accumulate. The per-index draws are independent and the
/// reduction is a fixed sequential pass over the sample arrays, so the
/// result is bit-identical for any n_threads.
McSummary run_mc(const ObservedMargins& obs, const McConfig& config,
                 int n_threads = 1);

}  // namespace sharpbounds
