#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "agsense/data/activity_matrix.hpp"

namespace agsense::data {

// Per-sensor scaling fitted on a training split: each cell is divided by
// that sensor's 99th-percentile hourly count and clipped to [0, 1]. Counts
// are non-negative and heavy-tailed, so a high quantile gives a stable
// ceiling; an all-zero sensor column falls back to divisor 1.
class Normalizer {
 public:
  Normalizer() { divisors_.fill(1.0); }

  explicit Normalizer(const std::array<double, kSensorCount>& divisors)
      : divisors_(divisors) {
    for (double d : divisors_)
      if (!(d > 0.0)) throw ValidationError("normalizer divisors must be > 0");
  }

  static Normalizer fit(const std::vector<ActivityMatrix>& train) {
    Normalizer n;
    for (int s = 0; s < kSensorCount; ++s) {
      std::vector<int> column;
      column.reserve(train.size() * kHoursPerDay);
      for (const auto& m : train)
        for (int h = 0; h < kHoursPerDay; ++h) column.push_back(m.at(h, s));
      double p = nearest_rank_percentile(column, 0.99);
      n.divisors_[static_cast<std::size_t>(s)] = p > 0.0 ? p : 1.0;
    }
    return n;
  }

  // 24x8 tensor in [0, 1]
  nn::Tensor apply(const ActivityMatrix& m) const {
    nn::Tensor t({kHoursPerDay, kSensorCount});
    for (int h = 0; h < kHoursPerDay; ++h)
      for (int s = 0; s < kSensorCount; ++s) {
        double v = m.at(h, s) / divisors_[static_cast<std::size_t>(s)];
        t[h * kSensorCount + s] = std::min(v, 1.0);
      }
    return t;
  }

  const std::array<double, kSensorCount>& divisors() const {
    return divisors_;
  }

  static double nearest_rank_percentile(std::vector<int> values, double q) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    std::size_t rank = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(values.size())));
    if (rank == 0) rank = 1;
    return static_cast<double>(values[rank - 1]);
  }

 private:
  std::array<double, kSensorCount> divisors_;
};

}  // namespace agsense::data
