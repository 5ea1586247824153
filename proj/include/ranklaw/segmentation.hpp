#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ranklaw/fit.hpp"
#include "ranklaw/models.hpp"
#include "ranklaw/series.hpp"

namespace ranklaw {

struct SegmentationConfig {
  int smoothing_window = 5;  // odd, >= 3
  // Minimum prominence for the derivative peak; when unset it defaults to
  // twice the median |d| over the derivative's domain.
  std::optional<double> derivative_peak_min_prominence;
  int shoulder_window = 15;
  double shoulder_rel_threshold = 0.10;
  int top_class_max = 20;
};

struct RankInterval {
  int lo = 1;
  int hi = 0;
  bool empty() const { return lo > hi; }
  int length() const { return empty() ? 0 : hi - lo + 1; }
};

struct SegmentationResult {
  int r1 = 0;                        // top-class boundary; 0 means no top class
  std::optional<int> shoulder_rank;  // first rank of the tail class, if any
  std::optional<FitResult> top_fit;  // zipf over ranks 1..r1
  FitResult middle_fit;              // universal form over ranks r1+1..N
  RankInterval top, middle, tail;    // partition of 1..N
};

namespace detail {

inline void validate_segmentation_config(const SegmentationConfig& cfg) {
  if (cfg.smoothing_window < 3 || cfg.smoothing_window % 2 == 0)
    throw std::invalid_argument("smoothing_window must be odd and >= 3");
  if (cfg.derivative_peak_min_prominence && !(*cfg.derivative_peak_min_prominence > 0.0))
    throw std::invalid_argument("derivative_peak_min_prominence must be positive");
  if (cfg.shoulder_window < 1) throw std::invalid_argument("shoulder_window must be >= 1");
  if (!(cfg.shoulder_rel_threshold > 0.0)) throw std::invalid_argument("shoulder_rel_threshold must be positive");
  if (cfg.top_class_max < 1) throw std::invalid_argument("top_class_max must be >= 1");
}

// Topographic prominence of g[i]: height above the higher of the two
// valley floors reached before a taller point (or the domain edge).
inline double peak_prominence(const std::vector<double>& g, std::size_t i) {
  double left_min = g[i];
  for (std::size_t j = i; j-- > 0;) {
    left_min = std::min(left_min, g[j]);
    if (g[j] > g[i]) break;
  }
  double right_min = g[i];
  for (std::size_t j = i + 1; j < g.size(); ++j) {
    right_min = std::min(right_min, g[j]);
    if (g[j] > g[i]) break;
  }
  return g[i] - std::max(left_min, right_min);
}

}  // namespace detail

// Locates the top-class boundary r1: the most prominent interior peak of
// |d|, where d is the discrete derivative of the moving-average of
// ln(size). The forward difference over a centered window of half-width h
// peaks h+1 ranks past a slope break, so the peak rank is shifted back by
// h+1 before applying the top_class_max cap. Returns 0 when no peak
// qualifies (no top class).
inline int detect_top_boundary(const RankedSeries& series, const SegmentationConfig& config = {}) {
  detail::validate_segmentation_config(config);
  const int n = series.size();
  const int w = config.smoothing_window;
  if (n < 3 * w) throw std::invalid_argument("series too short for the smoothing window");
  const int h = (w - 1) / 2;

  std::vector<double> logs(static_cast<std::size_t>(n));
  for (int r = 1; r <= n; ++r) logs[static_cast<std::size_t>(r) - 1] = std::log(series.at_rank(r).size);

  // full-window moving average: s(r) for r in [1+h, n-h]
  const int s_lo = 1 + h, s_hi = n - h;
  std::vector<double> smooth(static_cast<std::size_t>(s_hi - s_lo + 1));
  double acc = 0.0;
  for (int j = 0; j < w; ++j) acc += logs[static_cast<std::size_t>(j)];
  smooth[0] = acc / w;
  for (int r = s_lo + 1; r <= s_hi; ++r) {
    acc += logs[static_cast<std::size_t>(r + h) - 1] - logs[static_cast<std::size_t>(r - h) - 2];
    smooth[static_cast<std::size_t>(r - s_lo)] = acc / w;
  }

  // |d(r)| = |s(r+1) - s(r)| for r in [1+h, n-h-1]
  std::vector<double> g(smooth.size() - 1);
  for (std::size_t i = 0; i + 1 < smooth.size(); ++i) g[i] = std::abs(smooth[i + 1] - smooth[i]);
  if (g.size() < 3) return 0;

  double threshold;
  if (config.derivative_peak_min_prominence) {
    threshold = *config.derivative_peak_min_prominence;
  } else {
    std::vector<double> sorted(g);
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
    threshold = 2.0 * sorted[sorted.size() / 2];
  }

  int best_rank = 0;
  double best_prom = 0.0;
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    if (!(g[i] > g[i - 1] && g[i] >= g[i + 1])) continue;
    const int peak_rank = s_lo + static_cast<int>(i);
    const int boundary = peak_rank - h - 1;
    if (boundary < 1 || boundary > config.top_class_max) continue;
    const double prom = detail::peak_prominence(g, i);
    if (prom < threshold) continue;
    if (prom > best_prom) {
      best_prom = prom;
      best_rank = boundary;
    }
  }
  return best_rank;
}

// Power-law fit to the top class, ranks 1..r1.
inline FitResult fit_top_class(const RankedSeries& series, int r1, const FitOptions& options = {}) {
  if (r1 < 2) throw std::invalid_argument("fit_top_class needs r1 >= 2");
  if (r1 > series.size()) throw std::invalid_argument("r1 exceeds the series length");
  detail::FitData data;
  for (int r = 1; r <= r1; ++r) {
    data.x.push_back(static_cast<double>(r));
    data.y.push_back(series.at_rank(r).size);
  }
  const ModelSpec model{Family::zipf, r1};
  auto init = init_guess(model, data.x, data.y);
  return detail::lm_fit_core(model, data, init, options);
}

// Universal-form fit to the remainder, ranks r1+1..N, with u recomputed
// on the reduced sub-series: u' = (r - r1)/(N - r1 + 1).
inline FitResult fit_middle_class(const RankedSeries& series, int r1, const FitOptions& options = {}) {
  const int n = series.size();
  if (r1 < 0 || n - r1 < 4) throw std::invalid_argument("fit_middle_class needs at least 4 ranks past r1");
  const int reduced = n - r1;
  detail::FitData data;
  for (int r = r1 + 1; r <= n; ++r) {
    data.x.push_back(static_cast<double>(r - r1) / (static_cast<double>(reduced) + 1.0));
    data.y.push_back(series.at_rank(r).size);
  }
  const ModelSpec model{Family::universal_lavalette, reduced};
  auto init = init_guess(model, data.x, data.y);
  return detail::lm_fit_core(model, data, init, options);
}

// First rank where the middle fit systematically deviates from the data:
// the running mean of the signed relative residual over the next
// shoulder_window ranks exceeds the threshold in magnitude while every
// residual in the window stays on one side (>= 0 or <= 0 throughout).
// The middle range is recovered from the fit's reduced length.
inline std::optional<int> detect_shoulder(const RankedSeries& series, const FitResult& middle_fit,
                                          const SegmentationConfig& config = {}) {
  detail::validate_segmentation_config(config);
  if (!middle_fit.converged) throw std::invalid_argument("detect_shoulder needs a converged middle fit");
  if (middle_fit.model.family != Family::universal_lavalette)
    throw std::invalid_argument("detect_shoulder expects a universal_lavalette middle fit");
  const int n = series.size();
  const int reduced = middle_fit.model.n_context;
  const int r1 = n - reduced;
  if (r1 < 0) throw std::invalid_argument("middle fit does not match the series");

  std::vector<double> rel(static_cast<std::size_t>(reduced));
  for (int r = r1 + 1; r <= n; ++r) {
    const double u = static_cast<double>(r - r1) / (static_cast<double>(reduced) + 1.0);
    const double predicted = eval(middle_fit.model, middle_fit.params, u);
    rel[static_cast<std::size_t>(r - r1) - 1] = (series.at_rank(r).size - predicted) / predicted;
  }

  const int window = config.shoulder_window;
  for (int start = 0; start + window <= reduced; ++start) {
    double sum = 0.0;
    bool non_negative = true, non_positive = true;
    for (int j = start; j < start + window; ++j) {
      const double e = rel[static_cast<std::size_t>(j)];
      sum += e;
      non_negative &= e >= 0.0;
      non_positive &= e <= 0.0;
    }
    if ((non_negative || non_positive) && std::abs(sum / window) > config.shoulder_rel_threshold)
      return r1 + 1 + start;
  }
  return std::nullopt;
}

// The full three-class decomposition. With no qualifying top boundary the
// top interval is empty; with no shoulder the tail is empty. The three
// intervals always partition 1..N.
inline SegmentationResult segment(const RankedSeries& series, const SegmentationConfig& config = {},
                                  const FitOptions& options = {}) {
  const int n = series.size();
  SegmentationResult out;
  int r1 = detect_top_boundary(series, config);
  if (r1 == 1) r1 = 0;  // a single-point top class cannot be fitted
  out.r1 = r1;
  if (r1 >= 2) out.top_fit = fit_top_class(series, r1, options);
  out.middle_fit = fit_middle_class(series, r1, options);
  if (out.middle_fit.converged) out.shoulder_rank = detect_shoulder(series, out.middle_fit, config);

  out.top = {1, r1};
  const int tail_start = out.shoulder_rank.value_or(n + 1);
  out.middle = {r1 + 1, tail_start - 1};
  out.tail = {tail_start, n};
  return out;
}

}  // namespace ranklaw
