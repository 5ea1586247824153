#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ranklaw/series.hpp"

namespace ranklaw {

// Which skewness/kurtosis estimator to report. bias_corrected matches the
// usual spreadsheet/statistics-package sample formulas; population uses the
// plain central-moment ratios. Kurtosis is excess in both (normal -> 0).
enum class MomentConvention { bias_corrected, population };

struct SummaryStats {
  std::size_t n = 0;
  double minimum = 0.0;
  double maximum = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double rms = 0.0;
  double variance = 0.0;   // sample variance, N-1 denominator
  double std_error = 0.0;  // sqrt(variance / N)
  std::optional<double> skewness;
  std::optional<double> kurtosis_excess;
  std::optional<double> mean_over_sigma;  // absent when variance == 0
};

// Descriptive statistics of a size multiset. Input order is irrelevant.
inline SummaryStats summarize(std::vector<double> sizes,
                              MomentConvention convention = MomentConvention::bias_corrected) {
  const std::size_t n = sizes.size();
  if (n < 3) throw std::invalid_argument("summarize needs at least 3 values");
  const double dn = static_cast<double>(n);

  SummaryStats s;
  s.n = n;

  std::sort(sizes.begin(), sizes.end());
  s.minimum = sizes.front();
  s.maximum = sizes.back();
  s.median = (n % 2 == 1) ? sizes[n / 2] : 0.5 * (sizes[n / 2 - 1] + sizes[n / 2]);

  double sum = 0.0, sum_sq = 0.0;
  for (double v : sizes) {
    sum += v;
    sum_sq += v * v;
  }
  s.mean = sum / dn;
  s.rms = std::sqrt(sum_sq / dn);

  // two-pass central moments
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : sizes) {
    const double d = v - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  s.variance = m2 / (dn - 1.0);
  s.std_error = std::sqrt(s.variance / dn);
  m2 /= dn;
  m3 /= dn;
  m4 /= dn;

  if (s.variance > 0.0) {
    s.mean_over_sigma = s.mean / std::sqrt(s.variance);
    const double g1 = m3 / std::pow(m2, 1.5);
    const double g2 = m4 / (m2 * m2) - 3.0;
    if (convention == MomentConvention::population) {
      s.skewness = g1;
      s.kurtosis_excess = g2;
    } else {
      s.skewness = std::sqrt(dn * (dn - 1.0)) / (dn - 2.0) * g1;
      if (n >= 4)
        s.kurtosis_excess = (dn - 1.0) / ((dn - 2.0) * (dn - 3.0)) * ((dn + 1.0) * g2 + 6.0);
      // bias-corrected kurtosis is undefined for n == 3
    }
  }
  return s;
}

inline SummaryStats summarize(const RankedSeries& series,
                              MomentConvention convention = MomentConvention::bias_corrected) {
  return summarize(series.sizes(), convention);
}

}  // namespace ranklaw
