#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace robustmean {

// An immutable batch of finite observations with a cached sorted copy.
// Rejects empty input and any NaN/infinity at construction.
class Sample {
 public:
  explicit Sample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("Sample: empty");
    for (double v : values_) {
      if (!std::isfinite(v)) throw std::invalid_argument("Sample: non-finite value");
    }
    sorted_ = values_;
    std::sort(sorted_.begin(), sorted_.end());
  }

  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& sorted() const noexcept { return sorted_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
  std::vector<double> sorted_;
};

}  // namespace robustmean
