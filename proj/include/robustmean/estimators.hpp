#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "robustmean/rng.hpp"
#include "robustmean/sample.hpp"

// The five location estimators and their building blocks. All functions are
// pure; randomness (the median-of-means shuffle) comes in only through an
// explicit seed.

namespace robustmean {

struct WinsorizeParams {
  double beta = 3.0;  // outlyingness cutoff, in MAD units
};

struct CatoniParams {
  double alpha = 1.0;
  double tolerance = 1e-10;  // stopping width of the bisection bracket
  int max_iterations = 200;
};

enum class PartitionRule { contiguous, seeded_shuffle };

struct MomParams {
  std::size_t k = 5;  // number of groups
  PartitionRule partition_rule = PartitionRule::contiguous;
};

struct TrimParams {
  double epsilon = 0.1;  // trim fraction, in [0, 1/2)
};

struct CatoniNoConvergence : std::runtime_error {
  CatoniNoConvergence(double lo, double hi)
      : std::runtime_error("catoni_mean: bisection did not converge"),
        bracket_lo(lo),
        bracket_hi(hi) {}
  double bracket_lo;
  double bracket_hi;
};

namespace detail {

// Mid-average median of an already sorted range, 1-based order statistics
// z_(floor((n+1)/2)) and z_(floor((n+2)/2)).
inline double median_sorted(const std::vector<double>& z) {
  const std::size_t n = z.size();
  return 0.5 * (z[(n + 1) / 2 - 1] + z[(n + 2) / 2 - 1]);
}

}  // namespace detail

inline double median(const Sample& sample) {
  return detail::median_sorted(sample.sorted());
}

inline double mean(const Sample& sample) {
  const auto& v = sample.values();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Raw median of absolute deviations; no consistency rescaling. Selects the
// two mid order statistics directly instead of sorting the deviations.
inline double mad(const Sample& sample) {
  const double center = median(sample);
  std::vector<double> dev;
  dev.reserve(sample.size());
  for (double x : sample.values()) dev.push_back(std::fabs(x - center));
  const std::size_t n = dev.size();
  const std::size_t lo = (n + 1) / 2 - 1;
  std::nth_element(dev.begin(), dev.begin() + static_cast<std::ptrdiff_t>(lo), dev.end());
  const double a = dev[lo];
  if ((n + 2) / 2 - 1 == lo) return a;
  const double b = *std::min_element(dev.begin() + static_cast<std::ptrdiff_t>(lo) + 1,
                                     dev.end());
  return 0.5 * (a + b);
}

inline double outlyingness(double x, double mu, double sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("outlyingness: degenerate scale (sigma <= 0)");
  return std::fabs(x - mu) / sigma;
}

inline std::pair<double, double> winsorize_bounds(double mu, double sigma, double beta) {
  if (sigma < 0.0) throw std::domain_error("winsorize_bounds: sigma < 0");
  if (beta < 0.0) throw std::domain_error("winsorize_bounds: beta < 0");
  return {mu - beta * sigma, mu + beta * sigma};
}

inline double phi(double x, double lower, double upper) {
  if (lower > upper) throw std::domain_error("phi: lower > upper");
  return std::clamp(x, lower, upper);
}

struct WinsorizedDetail {
  double median = 0.0;
  double mad = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t clipped_low = 0;
  std::size_t clipped_high = 0;
  double estimate = 0.0;
};

inline WinsorizedDetail winsorized_mean_detail(const Sample& sample,
                                               const WinsorizeParams& params) {
  if (params.beta < 0.0 || !std::isfinite(params.beta)) {
    throw std::domain_error("winsorized_mean: beta must be finite and >= 0");
  }
  WinsorizedDetail d;
  d.median = median(sample);
  d.mad = mad(sample);
  if (d.mad == 0.0 && params.beta > 0.0) {
    throw std::domain_error("winsorized_mean: degenerate scale (MAD = 0)");
  }
  std::tie(d.lower, d.upper) = winsorize_bounds(d.median, d.mad, params.beta);
  double sum = 0.0;
  for (double x : sample.values()) {
    if (x < d.lower) {
      ++d.clipped_low;
      sum += d.lower;
    } else if (x > d.upper) {
      ++d.clipped_high;
      sum += d.upper;
    } else {
      sum += x;
    }
  }
  // A collapsed interval means every point clips to the median; return it
  // exactly instead of accumulating n copies through the sum.
  d.estimate = d.lower == d.upper ? d.lower : sum / static_cast<double>(sample.size());
  return d;
}

inline double winsorized_mean(const Sample& sample, const WinsorizeParams& params) {
  return winsorized_mean_detail(sample, params).estimate;
}

// Odd, strictly increasing influence function log(1 + x + x^2/2) for x >= 0.
inline double catoni_psi(double x) {
  if (x >= 0.0) return std::log1p(x + 0.5 * x * x);
  return -std::log1p(-x + 0.5 * x * x);
}

// Unique root of sum psi(alpha (y_i - mu)) = 0, bracketed in
// [min - 1, max + 1]; the sum is strictly decreasing in mu.
inline double catoni_mean(const Sample& sample, const CatoniParams& params) {
  if (!(params.alpha > 0.0)) throw std::domain_error("catoni_mean: alpha must be > 0");
  const auto sum_psi = [&](double mu) {
    double s = 0.0;
    for (double y : sample.values()) s += catoni_psi(params.alpha * (y - mu));
    return s;
  };
  double lo = sample.sorted().front() - 1.0;
  double hi = sample.sorted().back() + 1.0;
  for (int i = 0; i < params.max_iterations; ++i) {
    if (hi - lo <= params.tolerance) return 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    // Wide brackets can exhaust double precision before reaching the
    // absolute tolerance; the midpoint is then the best representable root.
    if (mid == lo || mid == hi) return mid;
    const double f = sum_psi(mid);
    if (f == 0.0) return mid;
    (f > 0.0 ? lo : hi) = mid;
  }
  if (hi - lo <= params.tolerance) return 0.5 * (lo + hi);
  throw CatoniNoConvergence(lo, hi);
}

// Group index sets for median-of-means. When k does not divide n the first
// (n mod k) groups take one extra point. The shuffled rule permutes indices
// with a Fisher-Yates pass driven only by (seed, n).
inline std::vector<std::vector<std::size_t>> mom_partition(std::size_t n,
                                                           const MomParams& params,
                                                           std::uint64_t seed) {
  const std::size_t k = params.k;
  if (k < 1 || k > n) throw std::domain_error("mom: k out of range [1, n]");
  if (k > 1 && k < n && n / k < 2) {
    throw std::domain_error("mom: group size floor(n/k) must be at least 2");
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (params.partition_rule == PartitionRule::seeded_shuffle) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double u = rng::uniform01(seed, rng::kStreamShuffle, i);
      const std::size_t j = i + static_cast<std::size_t>(u * static_cast<double>(n - i));
      std::swap(idx[i], idx[std::min(j, n - 1)]);
    }
  }
  std::vector<std::vector<std::size_t>> groups(k);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t pos = 0;
  for (std::size_t g = 0; g < k; ++g) {
    const std::size_t sz = base + (g < extra ? 1 : 0);
    groups[g].assign(idx.begin() + static_cast<std::ptrdiff_t>(pos),
                     idx.begin() + static_cast<std::ptrdiff_t>(pos + sz));
    pos += sz;
  }
  return groups;
}

inline double mom(const Sample& sample, const MomParams& params, std::uint64_t seed) {
  const auto groups = mom_partition(sample.size(), params, seed);
  std::vector<double> group_means;
  group_means.reserve(groups.size());
  for (const auto& g : groups) {
    double s = 0.0;
    for (std::size_t i : g) s += sample[i];
    group_means.push_back(s / static_cast<double>(g.size()));
  }
  std::sort(group_means.begin(), group_means.end());
  return detail::median_sorted(group_means);
}

// Two-sample trimmed (winsorized) mean: clip levels are the order statistics
// Y*_(t) and Y*_(n-t+1) of the auxiliary sample, t = floor(epsilon n).
// t = 0 degrades to the plain mean of x.
inline double lm_trimmed_mean(const Sample& x_sample, const Sample& y_sample,
                              const TrimParams& params) {
  if (!(params.epsilon >= 0.0 && params.epsilon < 0.5)) {
    throw std::domain_error("lm_trimmed_mean: epsilon must be in [0, 1/2)");
  }
  const std::size_t n = x_sample.size();
  if (y_sample.size() != n) {
    throw std::domain_error("lm_trimmed_mean: samples must have equal length");
  }
  const auto t = static_cast<std::size_t>(std::floor(params.epsilon * static_cast<double>(n)));
  if (t == 0) return mean(x_sample);
  const double lower = y_sample.sorted()[t - 1];          // Y*_(t)
  const double upper = y_sample.sorted()[n - t];          // Y*_(n-t+1)
  double sum = 0.0;
  for (double x : x_sample.values()) sum += std::clamp(x, lower, upper);
  return sum / static_cast<double>(n);
}

// Uniform handle over the five estimators plus the plain mean baseline.
enum class EstimatorKind { mean, median, winsorized, catoni, mom, lm_trimmed };

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::mean;
  WinsorizeParams winsorize{};
  CatoniParams catoni{};
  MomParams mom{};
  TrimParams trim{};

  static EstimatorSpec Mean() { return {EstimatorKind::mean}; }
  static EstimatorSpec Median() { return {EstimatorKind::median}; }
  static EstimatorSpec Winsorized(double beta = 3.0) {
    EstimatorSpec s{EstimatorKind::winsorized};
    s.winsorize.beta = beta;
    return s;
  }
  static EstimatorSpec Catoni(double alpha = 1.0) {
    EstimatorSpec s{EstimatorKind::catoni};
    s.catoni.alpha = alpha;
    return s;
  }
  static EstimatorSpec Mom(std::size_t k, PartitionRule rule = PartitionRule::contiguous) {
    EstimatorSpec s{EstimatorKind::mom};
    s.mom.k = k;
    s.mom.partition_rule = rule;
    return s;
  }
  static EstimatorSpec LmTrimmed(double epsilon) {
    EstimatorSpec s{EstimatorKind::lm_trimmed};
    s.trim.epsilon = epsilon;
    return s;
  }

  std::string name() const {
    switch (kind) {
      case EstimatorKind::mean: return "mean";
      case EstimatorKind::median: return "median";
      case EstimatorKind::winsorized: return "winsorized";
      case EstimatorKind::catoni: return "catoni";
      case EstimatorKind::mom: return "mom";
      case EstimatorKind::lm_trimmed: return "lm_trimmed";
    }
    return "unknown";
  }
};

inline EstimatorKind estimator_kind_from_name(const std::string& name) {
  if (name == "mean") return EstimatorKind::mean;
  if (name == "median") return EstimatorKind::median;
  if (name == "winsorized") return EstimatorKind::winsorized;
  if (name == "catoni") return EstimatorKind::catoni;
  if (name == "mom") return EstimatorKind::mom;
  if (name == "lm_trimmed") return EstimatorKind::lm_trimmed;
  throw std::invalid_argument("unknown estimator: " + name);
}

// Single-sample dispatch. lm_trimmed needs a second sample; use the
// two-sample overload for it.
inline double estimate(const EstimatorSpec& spec, const Sample& sample, std::uint64_t seed) {
  switch (spec.kind) {
    case EstimatorKind::mean: return mean(sample);
    case EstimatorKind::median: return median(sample);
    case EstimatorKind::winsorized: return winsorized_mean(sample, spec.winsorize);
    case EstimatorKind::catoni: return catoni_mean(sample, spec.catoni);
    case EstimatorKind::mom: return mom(sample, spec.mom, seed);
    case EstimatorKind::lm_trimmed:
      throw std::invalid_argument("lm_trimmed requires a paired sample");
  }
  throw std::logic_error("estimate: bad kind");
}

inline double estimate(const EstimatorSpec& spec, const Sample& x_sample,
                       const Sample& y_sample, std::uint64_t seed) {
  if (spec.kind == EstimatorKind::lm_trimmed) {
    return lm_trimmed_mean(x_sample, y_sample, spec.trim);
  }
  return estimate(spec, x_sample, seed);
}

}  // namespace robustmean
