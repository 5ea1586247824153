#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace ranklaw::detail {

// Solves A x = b in place by Gaussian elimination with partial pivoting.
// A is n*n row-major and is destroyed; on success b holds the solution.
// Returns false when the matrix is singular to working precision.
inline bool solve_inplace(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return false;
  const double tiny = scale * static_cast<double>(n) * std::numeric_limits<double>::epsilon();

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row)
      if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col])) pivot = row;
    if (std::abs(a[pivot * n + col]) <= tiny) return false;
    if (pivot != col) {
      for (std::size_t j = col; j < n; ++j) std::swap(a[pivot * n + j], a[col * n + j]);
      std::swap(b[pivot], b[col]);
    }
    const double inv = 1.0 / a[col * n + col];
    for (std::size_t row = col + 1; row < n; ++row) {
      const double f = a[row * n + col] * inv;
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a[row * n + j] -= f * a[col * n + j];
      b[row] -= f * b[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * b[j];
    b[i] = s / a[i * n + i];
  }
  return true;
}

// Least-squares solve of the normal equations X^T X beta = X^T y for a
// design given column-wise. Returns false on a singular design.
inline bool normal_equations_solve(const std::vector<std::vector<double>>& columns,
                                   const std::vector<double>& y,
                                   std::vector<double>& beta) {
  const std::size_t p = columns.size();
  const std::size_t m = y.size();
  std::vector<double> xtx(p * p, 0.0);
  std::vector<double> xty(p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) s += columns[i][k] * columns[j][k];
      xtx[i * p + j] = s;
      xtx[j * p + i] = s;
    }
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += columns[i][k] * y[k];
    xty[i] = s;
  }
  if (!solve_inplace(xtx, xty, p)) return false;
  beta = std::move(xty);
  return true;
}

}  // namespace ranklaw::detail
