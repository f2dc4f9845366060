#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "robustmean/bounds.hpp"
#include "robustmean/contamination.hpp"
#include "robustmean/distributions.hpp"
#include "robustmean/estimators.hpp"
#include "robustmean/rng.hpp"

// Monte Carlo harnesses: breakdown probing, deviation tails, Lemma-style
// quantile stability frequencies, and efficiency comparison. Every report is
// a pure function of its arguments including the seed; per-trial seeds are
// derived independently so results do not depend on the worker count.

namespace robustmean {

inline const std::vector<double>& default_magnitude_schedule() {
  static const std::vector<double> schedule{1e3, 1e6, 1e9, 1e12};
  return schedule;
}

namespace detail {

// Runs fn(0..count-1) on up to `threads` workers; slot-indexed output keeps
// aggregation order-independent. threads = 0 picks the hardware width.
inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += threads) fn(i);
    });
  }
  for (auto& t : workers) t.join();
}

// Order statistic at probability q of an ascending vector.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  const auto n = static_cast<double>(sorted.size());
  const auto r = static_cast<std::size_t>(std::ceil(q * n));
  return sorted[std::min(sorted.size() - 1, std::max<std::size_t>(r, 1) - 1)];
}

}  // namespace detail

struct BreakdownProbe {
  bool diverged = false;
  double clean_estimate = 0.0;
  std::vector<std::pair<double, double>> trace;  // (magnitude, estimate)
  double max_abs_estimate = 0.0;
};

// Applies the estimator-appropriate adversary at each magnitude of the
// schedule. Divergence means the deviation from the clean estimate keeps
// growing with the magnitude: a bounded estimator settles to a constant once
// all contaminated points clip or fall outside the median half, while a
// broken one tracks the magnitude (linearly for the mean, sub-linearly but
// still monotonically for Catoni's log-scale psi).
inline BreakdownProbe breakdown_probe(const EstimatorSpec& spec, std::size_t n,
                                      std::size_t m,
                                      const std::vector<double>& schedule,
                                      std::uint64_t seed) {
  if (m > n) throw std::domain_error("breakdown_probe: m > n");
  if (schedule.size() < 2 || !std::is_sorted(schedule.begin(), schedule.end())) {
    throw std::domain_error("breakdown_probe: schedule must be increasing with >= 2 entries");
  }
  const DistributionSpec base = DistributionSpec::Gaussian(0.0, 1.0);
  const Sample clean_x = draw(base, n, seed, rng::kStreamDraw);
  const Sample clean_y = draw(base, n, seed, rng::kStreamDrawPair);

  BreakdownProbe probe;
  probe.clean_estimate = estimate(spec, clean_x, clean_y, seed);

  std::vector<double> deviations;
  for (double magnitude : schedule) {
    double est = 0.0;
    switch (spec.kind) {
      case EstimatorKind::mom:
        est = estimate(spec, mom_adversary_budget(clean_x, spec.mom, magnitude, seed, m),
                       seed);
        break;
      case EstimatorKind::lm_trimmed: {
        auto [ax, ay] = lm_adversary_budget(clean_x, clean_y, spec.trim.epsilon,
                                            magnitude, m);
        est = estimate(spec, ax, ay, seed);
        break;
      }
      default: {
        ContaminationSpec c{m, ContaminationStrategy::point_mass, magnitude,
                            AdversarySign::positive};
        const Sample dirty = contaminate(clean_x, c, seed);
        try {
          est = estimate(spec, dirty, seed);
        } catch (const std::domain_error&) {
          // A point-mass majority drives the MAD to zero and the winsorizing
          // interval collapses onto the contaminated median: the estimator
          // has already broken down, so record that degenerate limit.
          est = median(dirty);
        }
        break;
      }
    }
    probe.trace.emplace_back(magnitude, est);
    probe.max_abs_estimate = std::max(probe.max_abs_estimate, std::fabs(est));
    deviations.push_back(std::fabs(est - probe.clean_estimate));
  }

  probe.diverged = true;
  for (std::size_t i = 1; i < deviations.size(); ++i) {
    if (!(deviations[i] >= 1.05 * deviations[i - 1] && deviations[i] > 1.0)) {
      probe.diverged = false;
      break;
    }
  }
  return probe;
}

struct BreakdownEntry {
  std::size_t m = 0;
  bool diverged = false;
  double max_abs_estimate = 0.0;
  friend bool operator==(const BreakdownEntry&, const BreakdownEntry&) = default;
};

struct BreakdownReport {
  std::string estimator;
  std::size_t n = 0;
  std::vector<BreakdownEntry> per_m;
  Rational empirical_rbp{0, 1};
  Rational theoretical_rbp{0, 1};
  bool theoretical_is_upper_bound = false;
  bool monotone = true;  // diverged must be monotone in m
  std::uint64_t seed = 0;

  friend bool operator==(const BreakdownReport&, const BreakdownReport&) = default;
};

// Scans every m in [1, ceil(n/2) + 1]; the full scan gives the per-m trace
// and lets the monotonicity invariant be checked directly. For the LM
// trimmed mean m counts corrupted points among the 2n paired observations.
inline BreakdownReport empirical_rbp(const EstimatorSpec& spec, std::size_t n,
                                     std::uint64_t seed,
                                     const std::vector<double>& schedule =
                                         default_magnitude_schedule()) {
  if (n < 4) throw std::domain_error("empirical_rbp: n must be >= 4");
  BreakdownReport report;
  report.estimator = spec.name();
  report.n = n;
  report.seed = seed;
  const auto rbp = rbp_theoretical(spec, n);
  report.theoretical_rbp = rbp.rbp;
  report.theoretical_is_upper_bound = rbp.is_upper_bound;

  const std::size_t m_max = (n + 1) / 2 + 1;
  std::optional<std::size_t> first_diverging;
  bool seen_diverged = false;
  for (std::size_t m = 1; m <= m_max; ++m) {
    const BreakdownProbe probe = breakdown_probe(spec, n, m, schedule, seed);
    report.per_m.push_back({m, probe.diverged, probe.max_abs_estimate});
    if (probe.diverged && !first_diverging) first_diverging = m;
    if (seen_diverged && !probe.diverged) report.monotone = false;
    seen_diverged = seen_diverged || probe.diverged;
  }
  const auto denominator = static_cast<std::int64_t>(
      spec.kind == EstimatorKind::lm_trimmed ? 2 * n : n);
  if (first_diverging) {
    report.empirical_rbp = {static_cast<std::int64_t>(*first_diverging), denominator};
  } else {
    report.empirical_rbp = {static_cast<std::int64_t>(m_max + 1), denominator};
  }
  return report;
}

struct TailPoint {
  double r = 0.0;
  double probability = 0.0;
  friend bool operator==(const TailPoint&, const TailPoint&) = default;
};

struct DeviationReport {
  std::string estimator;
  std::string dist;
  std::size_t n = 0;
  std::size_t trials = 0;
  double eps = 0.0;
  double delta = 0.05;
  double target = 0.0;
  std::uint64_t seed = 0;
  bool eps_n_fractional = false;  // floor(eps n) != eps n, floored with a warning
  std::vector<double> deviations;  // ascending
  std::vector<TailPoint> tail_curve;
  double quantile_at_delta = 0.0;

  friend bool operator==(const DeviationReport&, const DeviationReport&) = default;
};

// Deviation target on clean data: the population functional each estimator
// consistently estimates. For asymmetric families this is only known in
// closed form for the mean/median, so other estimators need a caller-supplied
// target (computed offline by quadrature).
inline double deviation_target(const EstimatorSpec& spec, const DistributionSpec& dist) {
  switch (spec.kind) {
    case EstimatorKind::mean:
      if (!dist.true_mean) {
        throw std::domain_error("deviation_target: family has no mean (supply a target)");
      }
      return *dist.true_mean;
    case EstimatorKind::median:
      return dist.true_median;
    default:
      if (dist.symmetric) return dist.true_median;  // symmetry center
      throw std::domain_error(
          "deviation_target: asymmetric family needs a caller-supplied target");
  }
}

inline DeviationReport deviation_experiment(
    const EstimatorSpec& spec, const DistributionSpec& dist, std::size_t n,
    std::size_t trials, double eps, ContaminationStrategy strategy, double magnitude,
    double delta, std::uint64_t seed, unsigned threads = 0,
    std::optional<double> target_override = std::nullopt) {
  if (trials < 100) throw std::domain_error("deviation_experiment: trials must be >= 100");
  if (!(eps >= 0.0 && eps < 0.5)) throw std::domain_error("deviation_experiment: eps in [0, 0.5)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("deviation_experiment: delta in (0,1)");

  DeviationReport report;
  report.estimator = spec.name();
  report.dist = dist.name();
  report.n = n;
  report.trials = trials;
  report.eps = eps;
  report.delta = delta;
  report.seed = seed;
  report.target = target_override ? *target_override : deviation_target(spec, dist);

  const double eps_n = eps * static_cast<double>(n);
  const auto m = static_cast<std::size_t>(std::floor(eps_n));
  report.eps_n_fractional = std::floor(eps_n) != eps_n;

  std::vector<double> deviations(trials);
  detail::parallel_for(trials, threads, [&](std::size_t t) {
    const std::uint64_t ts = rng::trial_seed(seed, t);
    Sample x = draw(dist, n, ts, rng::kStreamDraw);
    if (m > 0) {
      ContaminationSpec c{m, strategy, magnitude, AdversarySign::positive};
      x = contaminate(x, c, ts);
    }
    double est = 0.0;
    if (spec.kind == EstimatorKind::lm_trimmed) {
      const Sample y = draw(dist, n, ts, rng::kStreamDrawPair);
      est = estimate(spec, x, y, ts);
    } else {
      est = estimate(spec, x, ts);
    }
    deviations[t] = std::fabs(est - report.target);
  });
  std::sort(deviations.begin(), deviations.end());
  report.deviations = std::move(deviations);
  report.quantile_at_delta = detail::quantile_sorted(report.deviations, 1.0 - delta);

  // 50 log-spaced radii between the 50th and 99.9th percentile of deviations.
  double lo = detail::quantile_sorted(report.deviations, 0.5);
  const double hi = detail::quantile_sorted(report.deviations, 0.999);
  if (lo <= 0.0) {
    const auto it = std::upper_bound(report.deviations.begin(), report.deviations.end(), 0.0);
    lo = it != report.deviations.end() ? *it : 1e-12;
  }
  if (hi > lo) {
    constexpr int kGridPoints = 50;
    for (int i = 0; i < kGridPoints; ++i) {
      const double f = static_cast<double>(i) / (kGridPoints - 1);
      const double r = std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)));
      const auto exceed = report.deviations.end() -
                          std::upper_bound(report.deviations.begin(),
                                           report.deviations.end(), r);
      report.tail_curve.push_back(
          {r, static_cast<double>(exceed) / static_cast<double>(trials)});
    }
  }
  return report;
}

struct TailFit {
  double slope = 0.0;      // empirical -a in P ~ exp(-a r^2)
  double r_squared = 0.0;  // fit quality of log P against r^2
  std::size_t points_used = 0;
};

inline TailFit tail_fit(const DeviationReport& report) {
  std::vector<double> xs, ys;
  for (const TailPoint& p : report.tail_curve) {
    if (p.probability > 0.001 && p.probability < 0.5) {
      xs.push_back(p.r * p.r);
      ys.push_back(std::log(p.probability));
    }
  }
  if (xs.size() < 5) {
    throw std::runtime_error("tail_fit: fewer than 5 tail points with P in (0.001, 0.5)");
  }
  const auto count = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / count;
  double ss_res = 0.0, ss_tot = 0.0;
  const double y_mean = sy / count;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double fit = slope * xs[i] + intercept;
    ss_res += (ys[i] - fit) * (ys[i] - fit);
    ss_tot += (ys[i] - y_mean) * (ys[i] - y_mean);
  }
  return {slope, ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0, xs.size()};
}

struct Lemma41Report {
  std::string dist;
  std::size_t n = 0;
  std::size_t trials = 0;
  double eps = 0.0;
  double eps_star = 0.0;
  double median_threshold = 0.0;  // C1 eps*
  double mad_threshold = 0.0;     // C2 eps* / beta
  double median_ok_fraction = 0.0;
  double mad_ok_fraction = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const Lemma41Report&, const Lemma41Report&) = default;
};

// Fraction of trials where the contaminated-sample median and MAD stay within
// the quantile-stability thresholds of their population values.
inline Lemma41Report lemma41_check(const DistributionSpec& dist, std::size_t n,
                                   std::size_t trials, double eps, double eps_star,
                                   double c1, double c2, double beta, double magnitude,
                                   std::uint64_t seed, unsigned threads = 0) {
  if (!(eps_star >= 2.0 * eps && eps_star > 0.0 && eps_star < 0.5)) {
    throw std::domain_error("lemma41_check: eps_star must be in [2 eps, 0.5)");
  }
  if (!(c1 > 0.0 && c2 > 0.0)) throw std::domain_error("lemma41_check: constants must be > 0");
  Lemma41Report report;
  report.dist = dist.name();
  report.n = n;
  report.trials = trials;
  report.eps = eps;
  report.eps_star = eps_star;
  report.median_threshold = c1 * eps_star;
  report.mad_threshold = c2 * eps_star / beta;
  report.seed = seed;

  const auto m = static_cast<std::size_t>(std::floor(eps * static_cast<double>(n)));
  std::vector<unsigned char> med_ok(trials, 0), mad_ok(trials, 0);
  detail::parallel_for(trials, threads, [&](std::size_t t) {
    const std::uint64_t ts = rng::trial_seed(seed, t);
    Sample x = draw(dist, n, ts, rng::kStreamDraw);
    if (m > 0) {
      ContaminationSpec c{m, ContaminationStrategy::point_mass, magnitude,
                          AdversarySign::positive};
      x = contaminate(x, c, ts);
    }
    med_ok[t] = std::fabs(median(x) - dist.true_median) <= report.median_threshold;
    mad_ok[t] = std::fabs(mad(x) - dist.true_mad) <= report.mad_threshold;
  });
  const auto frac = [trials](const std::vector<unsigned char>& v) {
    std::size_t c = 0;
    for (unsigned char b : v) c += b;
    return static_cast<double>(c) / static_cast<double>(trials);
  };
  report.median_ok_fraction = frac(med_ok);
  report.mad_ok_fraction = frac(mad_ok);
  return report;
}

struct EfficiencyRow {
  std::string estimator;
  double standard_error = 0.0;
  double relative_to_mean = 0.0;  // se / se(mean)
  friend bool operator==(const EfficiencyRow&, const EfficiencyRow&) = default;
};

struct EfficiencyReport {
  std::string dist;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::vector<EfficiencyRow> rows;
  std::uint64_t seed = 0;
  friend bool operator==(const EfficiencyReport&, const EfficiencyReport&) = default;
};

// Empirical standard error of each estimator over clean draws, relative to
// the plain mean on the same per-trial samples.
inline EfficiencyReport efficiency_comparison(const DistributionSpec& dist, std::size_t n,
                                              std::size_t trials,
                                              const std::vector<EstimatorSpec>& specs,
                                              std::uint64_t seed, unsigned threads = 0) {
  if (trials < 1000) throw std::domain_error("efficiency_comparison: trials must be >= 1000");
  EfficiencyReport report;
  report.dist = dist.name();
  report.n = n;
  report.trials = trials;
  report.seed = seed;

  std::vector<EstimatorSpec> all{EstimatorSpec::Mean()};
  for (const auto& s : specs) {
    if (s.kind != EstimatorKind::mean) all.push_back(s);
  }
  std::vector<std::vector<double>> estimates(all.size(), std::vector<double>(trials));
  detail::parallel_for(trials, threads, [&](std::size_t t) {
    const std::uint64_t ts = rng::trial_seed(seed, t);
    const Sample x = draw(dist, n, ts, rng::kStreamDraw);
    const Sample y = draw(dist, n, ts, rng::kStreamDrawPair);
    for (std::size_t e = 0; e < all.size(); ++e) {
      estimates[e][t] = estimate(all[e], x, y, ts);
    }
  });
  const auto standard_error = [trials](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    const double m = s / static_cast<double>(trials);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(trials - 1));
  };
  const double se_mean = standard_error(estimates[0]);
  for (std::size_t e = 0; e < all.size(); ++e) {
    const double se = standard_error(estimates[e]);
    report.rows.push_back({all[e].name(), se, se / se_mean});
  }
  return report;
}

}  // namespace robustmean
