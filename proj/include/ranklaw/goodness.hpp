#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "ranklaw/fit.hpp"

namespace ranklaw {

// Unweighted sum of squared residuals between observed and predicted sizes.
inline double chi_square(std::span<const double> observed, std::span<const double> predicted) {
  if (observed.size() != predicted.size()) throw std::invalid_argument("chi_square: length mismatch");
  if (observed.empty()) throw std::invalid_argument("chi_square: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = observed[i] - predicted[i];
    s += d * d;
  }
  return s;
}

// 1 - SSR/TSS with TSS about the mean of the observations. May be negative
// for predictions worse than the mean.
inline double r_squared(std::span<const double> observed, std::span<const double> predicted) {
  if (observed.size() != predicted.size()) throw std::invalid_argument("r_squared: length mismatch");
  if (observed.size() < 2) throw std::invalid_argument("r_squared: need at least 2 points");
  const double mean =
      std::accumulate(observed.begin(), observed.end(), 0.0) / static_cast<double>(observed.size());
  double tss = 0.0;
  for (double v : observed) tss += (v - mean) * (v - mean);
  if (tss == 0.0) throw std::invalid_argument("r_squared: undefined when all observations are equal");
  return 1.0 - chi_square(observed, predicted) / tss;
}

enum class CompareCriterion { r_squared, chi_square_per_dof };

inline std::string_view criterion_name(CompareCriterion c) {
  return c == CompareCriterion::r_squared ? "r_squared" : "chi_square_per_dof";
}

struct ComparisonEntry {
  Family family = Family::zipf;
  double chi_square = 0.0;
  double r_squared = 0.0;
  int n_params = 0;
  int rank = 0;
};

struct ModelComparison {
  CompareCriterion criterion = CompareCriterion::r_squared;
  std::vector<ComparisonEntry> entries;  // sorted best first, rank 1..k
};

// Orders fits of the same series by the criterion; ties go to the model
// with fewer parameters, then to input order (stable).
inline ModelComparison compare(const std::vector<FitResult>& fits,
                               CompareCriterion criterion = CompareCriterion::r_squared) {
  if (fits.empty()) throw std::invalid_argument("compare: no fits given");
  ModelComparison cmp;
  cmp.criterion = criterion;
  for (const auto& f : fits) {
    cmp.entries.push_back({f.model.family, f.chi_square, f.r_squared,
                           static_cast<int>(param_count(f.model.family)), 0});
  }
  std::vector<double> dof;
  for (const auto& f : fits) dof.push_back(static_cast<double>(std::max(f.dof, 1)));

  std::vector<std::size_t> order(cmp.entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const auto& a = cmp.entries[i];
    const auto& b = cmp.entries[j];
    double ka, kb;
    if (criterion == CompareCriterion::r_squared) {
      ka = -a.r_squared;  // higher is better
      kb = -b.r_squared;
    } else {
      ka = a.chi_square / dof[i];  // lower is better
      kb = b.chi_square / dof[j];
    }
    if (ka != kb) return ka < kb;
    return a.n_params < b.n_params;
  });

  std::vector<ComparisonEntry> sorted;
  sorted.reserve(order.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    auto e = cmp.entries[order[pos]];
    e.rank = static_cast<int>(pos) + 1;
    sorted.push_back(e);
  }
  cmp.entries = std::move(sorted);
  return cmp;
}

}  // namespace ranklaw
