#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "robustmean/rng.hpp"
#include "robustmean/sample.hpp"

// Heavy-tailed samplers with analytically known population median and MAD.
// Draws go through the inverse CDF of a counter-based uniform stream, so a
// sample is a pure function of (spec, n, seed, stream).

namespace robustmean {

enum class DistFamily { gaussian, student_t, pareto, lognormal, point_mass_mixture };

struct DistributionSpec {
  DistFamily family = DistFamily::gaussian;
  // Family parameters:
  //   gaussian(mu, sd)            a = mu, b = sd
  //   student_t(df)               a = df
  //   pareto(shape, xm)           a = shape, b = xm
  //   lognormal(mu, sd)           a = mu, b = sd (log scale)
  //   point_mass_mixture(lo, hi)  a = lo, b = hi, w = weight of hi (< 1/2)
  double a = 0.0;
  double b = 1.0;
  double w = 0.0;
  double true_median = 0.0;
  double true_mad = 0.0;
  std::optional<double> true_mean;
  std::optional<double> true_sd;
  bool symmetric = false;

  double quantile(double u) const {
    switch (family) {
      case DistFamily::gaussian:
        return a + b * rng::normal_quantile(u);
      case DistFamily::student_t:
        return rng::student_t_quantile(u, a);
      case DistFamily::pareto:
        return b * std::pow(1.0 - u, -1.0 / a);
      case DistFamily::lognormal:
        return std::exp(a + b * rng::normal_quantile(u));
      case DistFamily::point_mass_mixture:
        return u < 1.0 - w ? a : b;
    }
    throw std::logic_error("DistributionSpec: bad family");
  }

  std::string name() const {
    switch (family) {
      case DistFamily::gaussian: return "gaussian";
      case DistFamily::student_t: return "student_t";
      case DistFamily::pareto: return "pareto";
      case DistFamily::lognormal: return "lognormal";
      case DistFamily::point_mass_mixture: return "point_mass_mixture";
    }
    return "unknown";
  }

  static DistributionSpec Gaussian(double mu, double sd);
  static DistributionSpec StudentT(double df);
  static DistributionSpec Pareto(double shape, double xm = 1.0);
  static DistributionSpec Lognormal(double mu, double sd);
  static DistributionSpec PointMassMixture(double lo, double hi, double weight_hi);
  static DistributionSpec PointMass(double c) { return PointMassMixture(c, c, 0.0); }
};

namespace detail {

// Solves F(med + m) - F(med - m) = 1/2 for the population MAD, given the CDF.
template <typename Cdf>
double mad_by_bisection(Cdf cdf, double med) {
  double lo = 0.0, hi = 1.0;
  const auto mass = [&](double m) { return cdf(med + m) - cdf(med - m); };
  while (mass(hi) < 0.5) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-13 * (1.0 + hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (mass(mid) < 0.5 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

inline DistributionSpec DistributionSpec::Gaussian(double mu, double sd) {
  if (!(sd > 0.0)) throw std::domain_error("gaussian: sd must be > 0");
  DistributionSpec d;
  d.family = DistFamily::gaussian;
  d.a = mu;
  d.b = sd;
  d.true_median = mu;
  d.true_mad = sd * rng::normal_quantile(0.75);
  d.true_mean = mu;
  d.true_sd = sd;
  d.symmetric = true;
  return d;
}

inline DistributionSpec DistributionSpec::StudentT(double df) {
  if (!(df > 0.0)) throw std::domain_error("student_t: df must be > 0");
  DistributionSpec d;
  d.family = DistFamily::student_t;
  d.a = df;
  d.true_median = 0.0;
  d.true_mad = rng::student_t_quantile(0.75, df);
  if (df > 1.0) d.true_mean = 0.0;
  if (df > 2.0) d.true_sd = std::sqrt(df / (df - 2.0));
  d.symmetric = true;
  return d;
}

inline DistributionSpec DistributionSpec::Pareto(double shape, double xm) {
  if (!(shape > 0.0) || !(xm > 0.0)) throw std::domain_error("pareto: shape and xm must be > 0");
  DistributionSpec d;
  d.family = DistFamily::pareto;
  d.a = shape;
  d.b = xm;
  d.true_median = xm * std::pow(2.0, 1.0 / shape);
  const auto cdf = [shape, xm](double x) {
    return x <= xm ? 0.0 : 1.0 - std::pow(x / xm, -shape);
  };
  d.true_mad = detail::mad_by_bisection(cdf, d.true_median);
  if (shape > 1.0) d.true_mean = shape * xm / (shape - 1.0);
  if (shape > 2.0) {
    d.true_sd = xm * std::sqrt(shape) / ((shape - 1.0) * std::sqrt(shape - 2.0));
  }
  return d;
}

inline DistributionSpec DistributionSpec::Lognormal(double mu, double sd) {
  if (!(sd > 0.0)) throw std::domain_error("lognormal: sd must be > 0");
  DistributionSpec d;
  d.family = DistFamily::lognormal;
  d.a = mu;
  d.b = sd;
  d.true_median = std::exp(mu);
  const auto cdf = [mu, sd](double x) {
    return x <= 0.0 ? 0.0 : rng::normal_cdf((std::log(x) - mu) / sd);
  };
  d.true_mad = detail::mad_by_bisection(cdf, d.true_median);
  d.true_mean = std::exp(mu + 0.5 * sd * sd);
  d.true_sd = std::sqrt((std::exp(sd * sd) - 1.0)) * *d.true_mean;
  return d;
}

inline DistributionSpec DistributionSpec::PointMassMixture(double lo, double hi,
                                                           double weight_hi) {
  if (!(weight_hi >= 0.0 && weight_hi < 0.5)) {
    throw std::domain_error("point_mass_mixture: weight must be in [0, 1/2)");
  }
  DistributionSpec d;
  d.family = DistFamily::point_mass_mixture;
  d.a = lo;
  d.b = hi;
  d.w = weight_hi;
  d.true_median = lo;  // majority component
  d.true_mad = 0.0;
  d.true_mean = (1.0 - weight_hi) * lo + weight_hi * hi;
  d.true_sd = std::sqrt(weight_hi * (1.0 - weight_hi)) * std::fabs(hi - lo);
  d.symmetric = (lo == hi);
  return d;
}

inline Sample draw(const DistributionSpec& dist, std::size_t n, std::uint64_t seed,
                   std::uint64_t stream = rng::kStreamDraw) {
  if (n < 1) throw std::domain_error("draw: n must be >= 1");
  std::vector<double> values;
  values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    values.push_back(dist.quantile(rng::uniform01(seed, stream, i)));
  }
  return Sample(std::move(values));
}

}  // namespace robustmean
