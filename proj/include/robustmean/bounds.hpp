#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "robustmean/estimators.hpp"

// Closed-form evaluation of the Bernstein tail, the quantile-stability
// threshold delta*, the deviation bound for the winsorized mean, and the
// theoretical breakdown points of all estimators.

namespace robustmean {

struct BoundParams {
  std::size_t n = 0;
  double delta = 0.05;     // failure probability, in (0,1)
  double eps = 0.0;        // contamination rate, in [0, 0.25)
  double eps_star = 0.0;   // slack, in [2 eps, 0.5); 0 allowed only when eps = 0
  double beta = 3.0;       // winsorizing cutoff, >= 1
  double mu = 0.0;         // population median
  double sigma = 1.0;      // population MAD, > 0
  double sigma_x = 1.0;    // population standard deviation, > 0
  double c1 = 1.0;         // quantile Lipschitz constant for the median
  double c2 = 1.0;         // quantile Lipschitz constant for the MAD deviations

  double c() const noexcept { return c1 + c2; }
  double u_star() const noexcept { return std::fabs(mu) + beta * sigma; }

  void validate() const {
    if (n < 1) throw std::domain_error("BoundParams: n must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("BoundParams: delta must be in (0,1)");
    if (!(eps >= 0.0 && eps < 0.25)) throw std::domain_error("BoundParams: eps must be in [0, 0.25)");
    const bool star_ok = (eps == 0.0 && eps_star == 0.0) ||
                         (eps_star >= 2.0 * eps && eps_star > 0.0 && eps_star < 0.5);
    if (!star_ok) throw std::domain_error("BoundParams: eps_star must be in [2 eps, 0.5)");
    if (!(beta >= 1.0)) throw std::domain_error("BoundParams: beta must be >= 1");
    if (!(sigma > 0.0)) throw std::domain_error("BoundParams: sigma must be > 0");
    if (!(sigma_x > 0.0)) throw std::domain_error("BoundParams: sigma_x must be > 0");
    if (!(c1 > 0.0 && c2 > 0.0)) throw std::domain_error("BoundParams: c1, c2 must be > 0");
  }
};

// P(mean of n centered variables >= t) <= exp(-n t^2 / (2 (nu + b t / 3))).
inline double bernstein_tail(std::size_t n, double t, double nu, double b) {
  if (!(t > 0.0)) throw std::domain_error("bernstein_tail: t must be > 0");
  if (!(b > 0.0)) throw std::domain_error("bernstein_tail: b must be > 0");
  if (nu < 0.0) throw std::domain_error("bernstein_tail: nu must be >= 0");
  const double nd = static_cast<double>(n);
  return std::exp(-nd * t * t / (2.0 * (nu + b * t / 3.0)));
}

inline double delta_star(std::size_t n, double eps_star) {
  if (!(eps_star > 0.0 && eps_star < 0.5)) {
    throw std::domain_error("delta_star: eps_star must be in (0, 0.5)");
  }
  const double nd = static_cast<double>(n);
  const double denom = 0.25 - eps_star * eps_star + eps_star / 6.0;
  return std::exp(-nd * eps_star * eps_star / (8.0 * denom));
}

struct ValidityResult {
  bool valid = false;
  double delta_star_value = 1.0;
  std::size_t min_n = 0;  // smallest n making delta > 24 delta* at these (delta, eps_star)
};

// Checks the delta > 24 delta* precondition. With eps = eps_star = 0 there is
// no quantile-stability step and the bound is the clean-sample tail alone, so
// the condition is vacuously satisfied.
inline ValidityResult check_validity(const BoundParams& params) {
  params.validate();
  ValidityResult r;
  if (params.eps_star == 0.0) {
    r.valid = true;
    r.delta_star_value = 0.0;
    r.min_n = 1;
    return r;
  }
  r.delta_star_value = delta_star(params.n, params.eps_star);
  r.valid = params.delta > 24.0 * r.delta_star_value;
  const double es = params.eps_star;
  const double rate = es * es / (8.0 * (0.25 - es * es + es / 6.0));
  r.min_n = static_cast<std::size_t>(std::floor(std::log(24.0 / params.delta) / rate)) + 1;
  return r;
}

struct DeviationBound {
  double value = 0.0;
  bool valid = false;        // delta > 24 delta* held
  double statistical = 0.0;  // clean-sample tail term
  double contamination = 0.0;
};

inline DeviationBound theorem41_bound(const BoundParams& params) {
  params.validate();
  DeviationBound r;
  r.valid = check_validity(params).valid;
  const double nd = static_cast<double>(params.n);
  const double log_term = std::log(6.0 / params.delta);
  r.statistical = std::sqrt(2.0) *
                  (params.u_star() / params.sigma_x * std::sqrt(2.0 * log_term / nd) + 1.0) *
                  params.sigma_x * std::sqrt(log_term / nd);
  r.contamination = params.c() * params.eps_star +
                    params.eps * (2.0 * params.beta * params.sigma +
                                  2.0 * params.c() * params.eps_star);
  r.value = r.statistical + r.contamination;
  return r;
}

inline double subgaussian_radius(double variance, std::size_t n, double delta, double c) {
  if (!(variance > 0.0)) throw std::domain_error("subgaussian_radius: variance must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("subgaussian_radius: delta must be in (0,1)");
  if (!(c > 0.0)) throw std::domain_error("subgaussian_radius: c must be > 0");
  return c * std::sqrt(variance * std::log(1.0 / delta) / static_cast<double>(n));
}

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

inline Rational reduced(std::int64_t num, std::int64_t den) {
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

struct RbpValue {
  Rational rbp;
  bool is_upper_bound = false;  // MOM and the LM trimmed mean carry bounds, not exact values
};

// Theoretical replacement breakdown points. For the LM trimmed mean the
// denominator is 2n: the adversary budget counts over both samples.
inline RbpValue rbp_theoretical(const EstimatorSpec& spec, std::size_t n) {
  if (n < 2) throw std::domain_error("rbp_theoretical: n must be >= 2");
  const auto ni = static_cast<std::int64_t>(n);
  switch (spec.kind) {
    case EstimatorKind::mean:
    case EstimatorKind::catoni:
      return {{1, ni}, false};
    case EstimatorKind::mom: {
      const auto k = static_cast<std::int64_t>(spec.mom.k);
      return {{(k + 1) / 2, ni}, true};
    }
    case EstimatorKind::lm_trimmed: {
      const auto t = static_cast<std::int64_t>(
          std::floor(spec.trim.epsilon * static_cast<double>(n)));
      return {{t + 1, 2 * ni}, true};
    }
    case EstimatorKind::winsorized:
    case EstimatorKind::median:
      return {{(ni + 1) / 2, ni}, false};
  }
  throw std::logic_error("rbp_theoretical: bad kind");
}

}  // namespace robustmean
