#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ranklaw/models.hpp"
#include "ranklaw/series.hpp"

namespace ranklaw {

enum class NoiseKind { none, multiplicative_gaussian };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::none;
  double sigma = 0.0;  // relative standard deviation
  std::uint64_t seed = 0;
};

namespace detail {

// Box-Muller normal deviate on top of mt19937_64, so generation depends
// only on the stated generator and not on the standard library's
// distribution internals.
inline double standard_normal(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(std::numeric_limits<double>::min(), 1.0);
  const double u1 = unit(rng);
  const double u2 = unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

inline std::string synthetic_label(int index, int n) {
  std::size_t width = 4;
  for (int v = n; v >= 10000; v /= 10) ++width;
  std::string digits = std::to_string(index);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return "item-" + digits;
}

inline RankedSeries finalize_synthetic(std::vector<double> values, const NoiseSpec& noise) {
  const int n = static_cast<int>(values.size());
  std::mt19937_64 rng(noise.seed);
  std::vector<RawRecord> records;
  records.reserve(values.size());
  for (int i = 0; i < n; ++i) {
    double y = values[static_cast<std::size_t>(i)];
    if (noise.kind == NoiseKind::multiplicative_gaussian && noise.sigma > 0.0) {
      double factor = 1.0 + noise.sigma * standard_normal(rng);
      int attempts = 0;
      while (!(factor > 0.0)) {
        if (++attempts > 100) throw std::runtime_error("noise kept producing non-positive sizes");
        factor = 1.0 + noise.sigma * standard_normal(rng);
      }
      y *= factor;
    }
    records.push_back({synthetic_label(i + 1, n), y});
  }
  return rank_series(std::move(records));
}

}  // namespace detail

// Evaluates the model at ranks 1..n (u = r/(n+1) for universal_lavalette),
// applies optional multiplicative Gaussian noise, then re-sorts and
// re-ranks so the RankedSeries invariants hold. Deterministic in the seed.
inline RankedSeries generate(Family family, const ParamVector& params, int n,
                             const NoiseSpec& noise = {}) {
  if (n < 3) throw std::invalid_argument("generate needs n >= 3");
  if (noise.sigma < 0.0) throw std::invalid_argument("noise sigma must be >= 0");
  const ModelSpec model{family, n};
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n));
  for (int r = 1; r <= n; ++r) {
    const double x = family == Family::universal_lavalette
                         ? static_cast<double>(r) / (static_cast<double>(n) + 1.0)
                         : static_cast<double>(r);
    values.push_back(eval(model, params, x));
  }
  return detail::finalize_synthetic(std::move(values), noise);
}

// One piece of a spliced series. The law is evaluated as if it governed
// from its start rank to the end of the series (local rank r' = r - lo + 1
// over an effective length n - lo + 1); the next segment supersedes it.
struct SpliceSegment {
  Family family = Family::zipf;
  ParamVector params;
  int lo = 1;
  int hi = 1;
};

struct SpliceSpec {
  std::vector<SpliceSegment> segments;  // intervals must partition 1..n
  bool continuity = true;               // rescale amplitudes so boundaries join
};

// Piecewise generation with continuity rescaling: each later segment is
// scaled so its first value equals the previous data value advanced one
// rank by the previous segment's own law (no jump at the boundary).
// Exponents are untouched; only an external scale factor is applied.
inline RankedSeries generate_spliced(const SpliceSpec& splice, int n, const NoiseSpec& noise = {}) {
  if (n < 3) throw std::invalid_argument("generate_spliced needs n >= 3");
  if (splice.segments.empty()) throw std::invalid_argument("splice needs at least one segment");
  int expect = 1;
  for (const auto& seg : splice.segments) {
    if (seg.lo != expect || seg.hi < seg.lo) throw std::invalid_argument("splice intervals must partition 1..n");
    expect = seg.hi + 1;
  }
  if (expect != n + 1) throw std::invalid_argument("splice intervals must cover exactly 1..n");

  auto segment_value = [n](const SpliceSegment& seg, int rank) {
    const int local = rank - seg.lo + 1;
    const int len = n - seg.lo + 1;  // law extends to the series end
    const ModelSpec model{seg.family, len};
    const double x = seg.family == Family::universal_lavalette
                         ? static_cast<double>(local) / (static_cast<double>(len) + 1.0)
                         : static_cast<double>(local);
    return eval(model, seg.params, x);
  };

  std::vector<double> values(static_cast<std::size_t>(n));
  double scale = 1.0;
  for (std::size_t s = 0; s < splice.segments.size(); ++s) {
    const auto& seg = splice.segments[s];
    if (splice.continuity && s > 0) {
      const auto& prev = splice.segments[s - 1];
      // previous data value advanced one rank under the previous law
      const double target = values[static_cast<std::size_t>(prev.hi) - 1] *
                            (segment_value(prev, prev.hi + 1) / segment_value(prev, prev.hi));
      scale = target / segment_value(seg, seg.lo);
    } else if (!splice.continuity) {
      scale = 1.0;
    }
    for (int r = seg.lo; r <= seg.hi; ++r)
      values[static_cast<std::size_t>(r) - 1] = scale * segment_value(seg, r);
  }
  return detail::finalize_synthetic(std::move(values), noise);
}

}  // namespace ranklaw
