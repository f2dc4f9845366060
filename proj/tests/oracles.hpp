#pragma once

// Independent brute-force oracles for the test suite. Everything here is
// written from the definitions, deliberately not sharing code with the
// library implementation it checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracles {

// Mid-average median from a full sort and 1-based order statistics.
inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  const std::size_t lo = (n + 1) / 2;  // 1-based
  const std::size_t hi = (n + 2) / 2;
  return (v[lo - 1] + v[hi - 1]) / 2.0;
}

inline double mad(const std::vector<double>& v) {
  const double center = median(v);
  std::vector<double> dev;
  for (double x : v) dev.push_back(std::fabs(x - center));
  return median(dev);
}

// Clip-then-average winsorized mean straight from the definition.
inline double winsorized_mean(const std::vector<double>& v, double beta) {
  const double med = median(v);
  const double scale = mad(v);
  if (scale == 0.0 && beta > 0.0) throw std::domain_error("oracle: degenerate scale");
  const double lower = med - beta * scale;
  const double upper = med + beta * scale;
  double sum = 0.0;
  for (double x : v) {
    sum += x < lower ? lower : (x > upper ? upper : x);
  }
  return sum / static_cast<double>(v.size());
}

// Two-sample trimmed mean by explicit order statistics.
inline double lm_trimmed_mean(const std::vector<double>& x, std::vector<double> y,
                              double epsilon) {
  const std::size_t n = x.size();
  const auto t = static_cast<std::size_t>(std::floor(epsilon * static_cast<double>(n)));
  if (t == 0) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(n);
  }
  std::sort(y.begin(), y.end());
  const double lower = y[t - 1];
  const double upper = y[n - t];
  double sum = 0.0;
  for (double v : x) sum += v < lower ? lower : (v > upper ? upper : v);
  return sum / static_cast<double>(n);
}

// Contiguous-blocks median of means with the first (n mod k) groups larger.
inline double mom_contiguous(const std::vector<double>& v, std::size_t k) {
  const std::size_t n = v.size();
  std::vector<double> means;
  std::size_t pos = 0;
  for (std::size_t g = 0; g < k; ++g) {
    const std::size_t sz = n / k + (g < n % k ? 1 : 0);
    double s = 0.0;
    for (std::size_t i = pos; i < pos + sz; ++i) s += v[i];
    means.push_back(s / static_cast<double>(sz));
    pos += sz;
  }
  return median(means);
}

// Straight-line transcriptions of the bound formulas, kept separate from the
// library versions on purpose.
inline double bernstein_tail(std::size_t n, double t, double nu, double b) {
  return std::exp(-(static_cast<double>(n) * t * t) / (2.0 * (nu + b * t / 3.0)));
}

inline double delta_star(std::size_t n, double eps_star) {
  const double e = eps_star;
  return std::exp(-(static_cast<double>(n) * e * e) / (8.0 * (0.25 - e * e + e / 6.0)));
}

inline double theorem41_bound(std::size_t n, double delta, double eps, double eps_star,
                              double beta, double mu, double sigma, double sigma_x,
                              double c1, double c2) {
  const double c_sum = c1 + c2;
  const double u_star = std::fabs(mu) + beta * sigma;
  const double nd = static_cast<double>(n);
  const double lt = std::log(6.0 / delta);
  const double stat = std::sqrt(2.0) * (u_star / sigma_x * std::sqrt(2.0 * lt / nd) + 1.0) *
                      sigma_x * std::sqrt(lt / nd);
  return stat + c_sum * eps_star + eps * (2.0 * beta * sigma + 2.0 * c_sum * eps_star);
}

inline double subgaussian_radius(double variance, std::size_t n, double delta, double c) {
  return c * std::sqrt(variance * std::log(1.0 / delta) / static_cast<double>(n));
}

}  // namespace oracles
