#include "sharpbounds/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "sharpbounds/detail/format.hpp"

namespace sharpbounds {

DegenerateSupport::DegenerateSupport(double lo, double hi)
    : Error("degenerate support: interval (" + detail::fmt_shortest(lo) +
            ", " + detail::fmt_shortest(hi) + ") has no interior"),
      lo(lo),
      hi(hi) {}

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::next_u64() {
  return mix64(seed_ + (counter_++) * kGamma);
}

double CounterRng::next_unit_open() {
  // 53-bit mantissa shifted by half an ulp: never exactly 0 or 1.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error("normal_quantile requires p in (0, 1), got " +
                detail::fmt_shortest(p));
  }
  // Acklam's rational approximation.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley step against the exact CDF.
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

ParamDistribution ParamDistribution::point(double v) {
  ParamDistribution d;
  d.kind = Kind::point_mass;
  d.value = v;
  return d;
}

ParamDistribution ParamDistribution::uniform() {
  ParamDistribution d;
  d.kind = Kind::uniform;
  return d;
}

ParamDistribution ParamDistribution::truncated_normal(double mean,
                                                      double variance) {
  if (!(variance > 0.0)) {
    throw Error("truncated normal requires variance > 0");
  }
  ParamDistribution d;
  d.kind = Kind::truncated_normal;
  d.mean = mean;
  d.variance = variance;
  return d;
}

ParamDistribution ParamDistribution::truncated_normal_auto(double variance) {
  ParamDistribution d = truncated_normal(0.0, variance);
  d.mean = std::numeric_limits<double>::quiet_NaN();
  return d;
}

BoundDistribution BoundDistribution::bind(const ParamDistribution& dist,
                                          double lo, double hi) {
  BoundDistribution b;
  b.spec_ = dist;
  b.lo_ = lo;
  b.hi_ = hi;
  switch (dist.kind) {
    case ParamDistribution::Kind::point_mass:
      if (dist.value < lo - kFeasibilityTol || dist.value > hi + kFeasibilityTol) {
        throw InfeasibleParams("point mass at " +
                               detail::fmt_shortest(dist.value) +
                               " lies outside [" + detail::fmt_shortest(lo) +
                               ", " + detail::fmt_shortest(hi) + "]");
      }
      b.spec_.value = std::clamp(dist.value, lo, hi);
      break;
    case ParamDistribution::Kind::uniform:
      if (!(hi - lo > 0.0)) throw DegenerateSupport(lo, hi);
      break;
    case ParamDistribution::Kind::truncated_normal: {
      if (!(hi - lo > 0.0)) throw DegenerateSupport(lo, hi);
      if (std::isnan(dist.mean)) b.spec_.mean = lo + (hi - lo) / 2.0;
      b.sigma_ = std::sqrt(dist.variance);
      b.cdf_lo_ = normal_cdf((lo - b.spec_.mean) / b.sigma_);
      b.cdf_hi_ = normal_cdf((hi - b.spec_.mean) / b.sigma_);
      break;
    }
  }
  return b;
}

double BoundDistribution::sample(CounterRng& stream) const {
  const double u = stream.next_unit_open();
  double x;
  switch (spec_.kind) {
    case ParamDistribution::Kind::point_mass:
      return spec_.value;  // the uniform is still consumed, above
    case ParamDistribution::Kind::uniform:
      x = lo_ + (hi_ - lo_) * u;
      break;
    case ParamDistribution::Kind::truncated_normal: {
      const double q = cdf_lo_ + u * (cdf_hi_ - cdf_lo_);
      x = spec_.mean + sigma_ * normal_quantile(q);
      break;
    }
    default:
      throw Error("unreachable distribution kind");
  }
  // Keep continuous draws strictly inside the open interval.
  if (x <= lo_) x = std::nextafter(lo_, hi_);
  if (x >= hi_) x = std::nextafter(hi_, lo_);
  return x;
}

double sample_param(const BoundDistribution& dist, CounterRng& stream) {
  return dist.sample(stream);
}

double BoundSummary::prob_leq(double x) const {
  if (sorted_samples.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_samples.begin(), sorted_samples.end(), x);
  return static_cast<double>(it - sorted_samples.begin()) /
         static_cast<double>(sorted_samples.size());
}

namespace {

struct BoundPair {
  BoundDistribution m;
  BoundDistribution big_m;
};

BoundPair bind_config(const ObservedMargins& obs, const McConfig& config) {
  const FeasibleRegion region = feasible_region(obs);
  return BoundPair{
      BoundDistribution::bind(config.m_dist, 0.0, region.m_star.value()),
      BoundDistribution::bind(config.big_m_dist, region.big_m_star.value(), 1.0),
  };
}

McDraw draw_at(const ObservedMargins& obs, const BoundPair& dists,
               const ContrastSpec& contrast, std::uint64_t seed,
               std::uint64_t index) {
  CounterRng stream(seed, 2 * index);
  McDraw d{};
  d.m = dists.m.sample(stream);
  d.big_m = dists.big_m.sample(stream);
  const SensitivityParams params = validate_params(obs, d.m, d.big_m);
  try {
    const ContrastInterval ci = contrast_interval(obs, params, contrast);
    d.lower = ci.lower;
    d.upper = ci.upper;
    d.indeterminate = false;
  } catch (const IndeterminateContrast&) {
    d.indeterminate = true;
  }
  return d;
}

// Inverse-empirical-CDF quantile: the smallest sample with at least a
// fraction q of the mass at or below it.
double quantile_at(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double n = static_cast<double>(sorted.size());
  auto idx = static_cast<std::size_t>(std::ceil(q * n));
  idx = idx > 0 ? idx - 1 : 0;
  if (idx >= sorted.size()) idx = sorted.size() - 1;
  return sorted[idx];
}

BoundSummary summarize_bound(std::vector<double> samples, int bins) {
  BoundSummary s;
  std::sort(samples.begin(), samples.end());
  s.sorted_samples = std::move(samples);

  // Finite prefix/suffix: infinities sort to the ends.
  const auto& v = s.sorted_samples;
  std::size_t first = 0, last = v.size();
  while (first < last && std::isinf(v[first])) ++first;
  while (last > first && std::isinf(v[last - 1])) --last;
  const std::size_t n_finite = last - first;
  s.n_infinite = v.size() - n_finite;

  if (n_finite > 0) {
    double sum = 0.0;
    for (std::size_t i = first; i < last; ++i) sum += v[i];
    s.mean = sum / static_cast<double>(n_finite);
    if (n_finite > 1) {
      double ss = 0.0;
      for (std::size_t i = first; i < last; ++i) {
        const double d = v[i] - s.mean;
        ss += d * d;
      }
      s.sd = std::sqrt(ss / static_cast<double>(n_finite - 1));
    }

    double lo = v[first], hi = v[last - 1];
    if (lo == hi) {  // degenerate range: one unit-wide bin span
      lo -= 0.5;
      hi += 0.5;
    }
    s.hist_edges.resize(bins + 1);
    for (int k = 0; k <= bins; ++k) {
      s.hist_edges[k] = k == bins ? hi : lo + (hi - lo) * k / bins;
    }
    s.hist_counts.assign(bins, 0);
    const double width = (hi - lo) / bins;
    for (std::size_t i = first; i < last; ++i) {
      auto bin = static_cast<std::int64_t>((v[i] - lo) / width);
      if (bin < 0) bin = 0;
      if (bin >= bins) bin = bins - 1;  // right edge closed
      ++s.hist_counts[static_cast<std::size_t>(bin)];
    }
  }

  if (!v.empty()) {
    s.quantiles = Quantiles{
        quantile_at(v, 0.01), quantile_at(v, 0.05), quantile_at(v, 0.25),
        quantile_at(v, 0.50), quantile_at(v, 0.75), quantile_at(v, 0.95),
        quantile_at(v, 0.99),
    };
  }
  return s;
}

}  // namespace

McDraw mc_draw(const ObservedMargins& obs, const McConfig& config,
               std::uint64_t index) {
  const BoundPair dists = bind_config(obs, config);
  return draw_at(obs, dists, config.contrast, config.seed, index);
}

McSummary run_mc(const ObservedMargins& obs, const McConfig& config,
                 int n_threads) {
  if (config.n_samples < 1) throw Error("n_samples must be >= 1");
  if (config.histogram_bins < 1) throw Error("histogram_bins must be >= 1");
  const BoundPair dists = bind_config(obs, config);
  const std::uint64_t n = config.n_samples;

  std::vector<double> lower(n), upper(n);
  std::vector<unsigned char> indet(n, 0);

  auto worker = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      const McDraw d = draw_at(obs, dists, config.contrast, config.seed, i);
      if (d.indeterminate) {
        indet[i] = 1;
      } else {
        lower[i] = d.lower;
        upper[i] = d.upper;
      }
    }
  };

  if (n_threads <= 1 || n < 2) {
    worker(0, n);
  } else {
    const auto workers = static_cast<std::uint64_t>(n_threads);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = (n + workers - 1) / workers;
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t begin = w * chunk;
      const std::uint64_t end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  // Sequential reduction over sample order: independent of thread count.
  McSummary summary;
  summary.n_samples = n;
  std::vector<double> lo_ok, up_ok;
  lo_ok.reserve(n);
  up_ok.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (indet[i]) {
      ++summary.n_indeterminate;
    } else {
      lo_ok.push_back(lower[i]);
      up_ok.push_back(upper[i]);
    }
  }
  summary.lower = summarize_bound(std::move(lo_ok), config.histogram_bins);
  summary.upper = summarize_bound(std::move(up_ok), config.histogram_bins);
  return summary;
}

}  // namespace sharpbounds
