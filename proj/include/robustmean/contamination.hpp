#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "robustmean/estimators.hpp"
#include "robustmean/rng.hpp"
#include "robustmean/sample.hpp"

// Replacement-contamination adversaries. Replaced values are large finite
// magnitudes, never infinities; divergence is probed by escalating the
// magnitude from outside.

namespace robustmean {

enum class ContaminationStrategy { point_mass, escalating, mom_aware, lm_aware };

enum class AdversarySign { positive, negative };

struct ContaminationSpec {
  std::size_t m = 0;
  ContaminationStrategy strategy = ContaminationStrategy::point_mass;
  double magnitude = 1e6;
  AdversarySign sign = AdversarySign::positive;

  double signed_magnitude() const noexcept {
    return sign == AdversarySign::positive ? magnitude : -magnitude;
  }
};

// m distinct replacement targets, seed-deterministic (partial Fisher-Yates).
inline std::vector<std::size_t> replacement_indices(std::size_t n, std::size_t m,
                                                    std::uint64_t seed) {
  if (m > n) throw std::domain_error("replacement_indices: m > n");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < m && i + 1 < n; ++i) {
    const double u = rng::uniform01(seed, rng::kStreamContaminate, i);
    const std::size_t j = i + static_cast<std::size_t>(u * static_cast<double>(n - i));
    std::swap(idx[i], idx[std::min(j, n - 1)]);
  }
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  return idx;
}

inline Sample contaminate(const Sample& sample, const ContaminationSpec& spec,
                          std::uint64_t seed) {
  if (spec.m > sample.size()) throw std::domain_error("contaminate: m > n");
  if (!std::isfinite(spec.magnitude) || spec.magnitude <= 0.0) {
    throw std::domain_error("contaminate: magnitude must be finite and > 0");
  }
  if (spec.strategy == ContaminationStrategy::mom_aware ||
      spec.strategy == ContaminationStrategy::lm_aware) {
    throw std::invalid_argument(
        "contaminate: use mom_adversary / lm_adversary for partition-aware strategies");
  }
  std::vector<double> values = sample.values();
  for (std::size_t i : replacement_indices(sample.size(), spec.m, seed)) {
    values[i] = spec.signed_magnitude();
  }
  return Sample(std::move(values));
}

// Places `count` contaminated points into distinct groups of the exact
// partition mom() will use for (k, rule, seed), round-robin when count > k.
inline Sample mom_adversary_budget(const Sample& sample, const MomParams& params,
                                   double magnitude, std::uint64_t seed,
                                   std::size_t count) {
  if (count > sample.size()) throw std::domain_error("mom_adversary: count > n");
  const auto groups = mom_partition(sample.size(), params, seed);
  std::vector<double> values = sample.values();
  for (std::size_t j = 0; j < count; ++j) {
    const auto& group = groups[j % groups.size()];
    values[group[(j / groups.size()) % group.size()]] = magnitude;
  }
  return Sample(std::move(values));
}

// Corrupts a majority of group means, floor((k+1)/2) replaced points in all.
inline Sample mom_adversary(const Sample& sample, const MomParams& params,
                            double magnitude, std::uint64_t seed) {
  return mom_adversary_budget(sample, params, magnitude, seed, (params.k + 1) / 2);
}

// The trimmed-mean construction: the floor(eps n) smallest entries of the
// auxiliary sample go to -magnitude, dragging the lower clip level down, and
// one x entry goes to -magnitude - 1 where it is no longer clipped away.
inline std::pair<Sample, Sample> lm_adversary_budget(const Sample& x_sample,
                                                     const Sample& y_sample,
                                                     double epsilon, double magnitude,
                                                     std::size_t budget) {
  const std::size_t n = x_sample.size();
  if (y_sample.size() != n) throw std::domain_error("lm_adversary: samples must match in length");
  const auto t = static_cast<std::size_t>(std::floor(epsilon * static_cast<double>(n)));
  if (t == 0) throw std::domain_error("lm_adversary: floor(eps n) must be >= 1");
  if (budget > 2 * n) throw std::domain_error("lm_adversary: budget > 2n");

  const auto smallest_indices = [](const Sample& s, std::size_t count) {
    std::vector<std::size_t> idx(s.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(count), idx.end(),
                      [&](std::size_t i, std::size_t j) { return s[i] < s[j]; });
    idx.resize(count);
    return idx;
  };

  std::vector<double> y = y_sample.values();
  const std::size_t in_y = std::min(budget, t);
  for (std::size_t i : smallest_indices(y_sample, in_y)) y[i] = -magnitude;

  std::vector<double> x = x_sample.values();
  const std::size_t in_x = std::min(budget - in_y, n);
  for (std::size_t i : smallest_indices(x_sample, in_x)) x[i] = -magnitude - 1.0;

  return {Sample(std::move(x)), Sample(std::move(y))};
}

inline std::pair<Sample, Sample> lm_adversary(const Sample& x_sample, const Sample& y_sample,
                                              double epsilon, double magnitude) {
  const auto t = static_cast<std::size_t>(
      std::floor(epsilon * static_cast<double>(x_sample.size())));
  return lm_adversary_budget(x_sample, y_sample, epsilon, magnitude, t + 1);
}

}  // namespace robustmean
