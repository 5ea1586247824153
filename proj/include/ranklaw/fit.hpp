#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ranklaw/detail/linalg.hpp"
#include "ranklaw/models.hpp"
#include "ranklaw/series.hpp"

namespace ranklaw {

struct FitOptions {
  int max_iterations = 200;
  double damping_init = 1e-3;
  double damping_up = 10.0;    // multiplied on rejected steps
  double damping_down = 10.0;  // divided on accepted steps
  double tol_ssr_rel = 1e-12;  // relative SSR improvement below this stalls
  double tol_grad = 1e-10;     // inf-norm of J^T r below this converges
};

enum class Termination { ssr_stalled, gradient_small, max_iterations, singular_normal_equations };

inline std::string_view termination_name(Termination t) {
  switch (t) {
    case Termination::ssr_stalled: return "ssr-stalled";
    case Termination::gradient_small: return "gradient-small";
    case Termination::max_iterations: return "max-iterations";
    case Termination::singular_normal_equations: return "singular-normal-equations";
  }
  return "?";
}

struct FitResult {
  ModelSpec model;
  ParamVector params;
  double chi_square = 0.0;  // unweighted sum of squared linear-space residuals
  double r_squared = 0.0;   // 1 - SSR/TSS, TSS about the mean
  int dof = 0;              // N - 1
  int dof_conventional = 0; // N - p
  int iterations = 0;       // accepted LM steps
  bool converged = false;
  Termination termination = Termination::max_iterations;
  std::vector<double> ssr_trace;  // SSR after each accepted step, starting at the initial point
};

namespace detail {

// (x, y) pairs in the family's own abscissa: rank for the rank families,
// u = r/(N+1) for universal_lavalette.
struct FitData {
  std::vector<double> x;
  std::vector<double> y;
};

inline FitData fit_data(Family family, const RankedSeries& series) {
  FitData d;
  const int n = series.size();
  d.x.reserve(static_cast<std::size_t>(n));
  d.y.reserve(static_cast<std::size_t>(n));
  for (const auto& e : series.entries()) {
    if (family == Family::universal_lavalette)
      d.x.push_back(static_cast<double>(e.rank) / (static_cast<double>(n) + 1.0));
    else
      d.x.push_back(static_cast<double>(e.rank));
    d.y.push_back(e.size);
  }
  return d;
}

inline FitData fit_data(Family family, const UniversalSeries& series) {
  if (family != Family::universal_lavalette)
    throw std::invalid_argument("a universal series can only be fitted with universal_lavalette");
  FitData d;
  for (const auto& p : series.points()) {
    d.x.push_back(p.u);
    d.y.push_back(p.size);
  }
  return d;
}

inline double sum_squared_residuals(const ModelSpec& model, std::span<const double> params,
                                    const FitData& data) {
  double ssr = 0.0;
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    const double f = eval_raw(model, params, data.x[i]);
    if (!std::isfinite(f)) return std::numeric_limits<double>::infinity();
    const double r = data.y[i] - f;
    ssr += r * r;
  }
  return ssr;
}

inline double total_sum_squares(std::span<const double> y) {
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double tss = 0.0;
  for (double v : y) tss += (v - mean) * (v - mean);
  return tss;
}

}  // namespace detail

// Ordinary least squares of ln y on the family's log-design columns. All
// families except zeta_pareto are exactly log-linear, so on noiseless data
// this recovers the generating parameters directly. zeta_pareto falls back
// to the power-law slope, clamped above 1.
inline ParamVector init_guess(const ModelSpec& model, const std::vector<double>& x,
                              const std::vector<double>& y) {
  const std::size_t m = x.size();
  if (m != y.size() || m == 0) throw std::invalid_argument("init_guess: x and y must be equal-length and nonempty");
  for (double v : y)
    if (!(v > 0.0)) throw std::invalid_argument("init_guess requires positive sizes");

  std::vector<double> logy(m);
  for (std::size_t i = 0; i < m; ++i) logy[i] = std::log(y[i]);

  const double n = static_cast<double>(model.n_context);
  std::vector<std::vector<double>> cols;
  const std::vector<double> ones(m, 1.0);
  auto col = [&](auto&& f) {
    std::vector<double> c(m);
    for (std::size_t i = 0; i < m; ++i) c[i] = f(x[i]);
    return c;
  };

  Family fam = model.family;
  if (fam == Family::zeta_pareto) fam = Family::zipf;  // slope-only surrogate
  switch (fam) {
    case Family::zipf:
      cols = {ones, col([](double v) { return -std::log(v); })};
      break;
    case Family::exponential:
      cols = {ones, col([](double v) { return -v; })};
      break;
    case Family::lavalette2:
      cols = {ones, col([n](double v) { return -std::log(n * v / (n - v + 1.0)); })};
      break;
    case Family::power_cutoff:
      cols = {ones, col([](double v) { return -std::log(v); }), col([](double v) { return -v; })};
      break;
    case Family::lavalette3:
      cols = {ones, col([n](double v) { return -std::log(n * v); }), col([n](double v) { return std::log(n - v + 1.0); })};
      break;
    case Family::universal_lavalette:
      cols = {ones, col([](double v) { return -std::log(v); }), col([](double v) { return std::log(1.0 - v); })};
      break;
    default: break;
  }

  std::vector<double> beta;
  if (!detail::normal_equations_solve(cols, logy, beta))
    throw std::runtime_error("init_guess: singular design (too few or degenerate points)");

  ParamVector out{{}, default_bounds(model.family)};
  if (model.family == Family::zeta_pareto) {
    out.values = {std::max(beta[1], 1.0 + 1e-6)};
  } else {
    beta[0] = std::exp(beta[0]);  // amplitude
    out.values = std::move(beta);
  }
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = std::clamp(out.values[i], out.bounds[i].lower, out.bounds[i].upper);
  return out;
}

inline ParamVector init_guess(const ModelSpec& model, const RankedSeries& series) {
  auto d = detail::fit_data(model.family, series);
  return init_guess(model, d.x, d.y);
}

inline ParamVector init_guess(const ModelSpec& model, const UniversalSeries& series) {
  auto d = detail::fit_data(model.family, series);
  return init_guess(model, d.x, d.y);
}

namespace detail {

// Damped normal-equations Levenberg-Marquardt on linear-space residuals
// y - f(x). A trial step is accepted only if it strictly reduces the SSR;
// damping goes up on rejection and down on acceptance. Trial parameters
// are clamped to their bounds before evaluation.
inline FitResult lm_fit_core(const ModelSpec& model, const FitData& data, const ParamVector& init,
                             const FitOptions& opt) {
  const std::size_t p = param_count(model.family);
  const std::size_t m = data.x.size();
  if (init.values.size() != p || init.bounds.size() != p)
    throw std::invalid_argument("lm_fit: init has the wrong parameter count");
  if (!init.within_bounds()) throw std::invalid_argument("lm_fit: init violates parameter bounds");
  if (opt.max_iterations < 1 || !(opt.damping_init > 0.0) || !(opt.damping_up > 1.0) ||
      !(opt.damping_down > 1.0) || !(opt.tol_ssr_rel > 0.0) || !(opt.tol_grad > 0.0))
    throw std::invalid_argument("lm_fit: invalid options");

  FitResult res;
  res.model = model;
  res.params = init;
  res.dof = static_cast<int>(m) - 1;
  res.dof_conventional = static_cast<int>(m) - static_cast<int>(p);

  auto& theta = res.params.values;
  double ssr = sum_squared_residuals(model, theta, data);
  if (!std::isfinite(ssr)) throw std::invalid_argument("lm_fit: init produces non-finite model values");
  res.ssr_trace.push_back(ssr);

  std::vector<double> fx(m), jac(m * p), grad(p), diag(p), a(p * p), lhs, rhs, trial(p);
  double lambda = opt.damping_init;
  const double lambda_max = 1e15;

  bool done = false;
  while (!done) {
    // model values and Jacobian d f / d theta = f * d ln f / d theta
    for (std::size_t i = 0; i < m; ++i) {
      fx[i] = eval_raw(model, theta, data.x[i]);
      auto lj = log_jacobian(model, res.params, data.x[i]);
      for (std::size_t j = 0; j < p; ++j) jac[i * p + j] = fx[i] * lj[j];
    }

    // gradient of the objective along J^T r
    double gmax = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      double g = 0.0;
      for (std::size_t i = 0; i < m; ++i) g += jac[i * p + j] * (data.y[i] - fx[i]);
      grad[j] = g;
      gmax = std::max(gmax, std::abs(g));
    }
    if (gmax < opt.tol_grad) {
      res.termination = Termination::gradient_small;
      res.converged = true;
      break;
    }

    // normal equations J^T J, with the damping scaled by the diagonal
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t k = j; k < p; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += jac[i * p + j] * jac[i * p + k];
        a[j * p + k] = s;
        a[k * p + j] = s;
      }
    }
    double max_diag = 0.0;
    for (std::size_t j = 0; j < p; ++j) max_diag = std::max(max_diag, a[j * p + j]);
    for (std::size_t j = 0; j < p; ++j)
      diag[j] = std::max(a[j * p + j], 1e-14 * max_diag);

    // inner loop: escalate damping until a step strictly reduces the SSR
    while (true) {
      lhs = a;
      rhs.assign(grad.begin(), grad.end());
      for (std::size_t j = 0; j < p; ++j) lhs[j * p + j] += lambda * diag[j];
      if (!solve_inplace(lhs, rhs, p)) {
        lambda *= opt.damping_up;
        if (lambda > lambda_max) {
          res.termination = Termination::singular_normal_equations;
          res.converged = false;
          done = true;
          break;
        }
        continue;
      }
      for (std::size_t j = 0; j < p; ++j)
        trial[j] = std::clamp(theta[j] + rhs[j], res.params.bounds[j].lower, res.params.bounds[j].upper);
      const double trial_ssr = sum_squared_residuals(model, trial, data);
      if (trial_ssr < ssr) {
        const double improvement = (ssr - trial_ssr) / ssr;
        theta = trial;
        ssr = trial_ssr;
        res.ssr_trace.push_back(ssr);
        ++res.iterations;
        lambda /= opt.damping_down;
        if (improvement < opt.tol_ssr_rel) {
          res.termination = Termination::ssr_stalled;
          res.converged = true;
          done = true;
        }
        break;
      }
      lambda *= opt.damping_up;
      if (lambda > lambda_max) {
        // no downhill step exists at any damping: the fit has stalled
        res.termination = Termination::ssr_stalled;
        res.converged = true;
        done = true;
        break;
      }
    }
    if (!done && res.iterations >= opt.max_iterations) {
      res.termination = Termination::max_iterations;
      res.converged = false;
      done = true;
    }
  }

  res.chi_square = ssr;
  const double tss = total_sum_squares(data.y);
  res.r_squared = tss > 0.0 ? 1.0 - ssr / tss : std::numeric_limits<double>::quiet_NaN();
  return res;
}

}  // namespace detail

inline FitResult lm_fit(const ModelSpec& model, const RankedSeries& series, const ParamVector& init,
                        const FitOptions& options = {}) {
  return detail::lm_fit_core(model, detail::fit_data(model.family, series), init, options);
}

inline FitResult lm_fit(const ModelSpec& model, const UniversalSeries& series, const ParamVector& init,
                        const FitOptions& options = {}) {
  return detail::lm_fit_core(model, detail::fit_data(model.family, series), init, options);
}

// init_guess composed with lm_fit.
inline FitResult fit(Family family, const RankedSeries& series, const FitOptions& options = {}) {
  const ModelSpec model{family, series.size()};
  return lm_fit(model, series, init_guess(model, series), options);
}

inline FitResult fit(Family family, const UniversalSeries& series, const FitOptions& options = {}) {
  const ModelSpec model{family, series.n()};
  return lm_fit(model, series, init_guess(model, series), options);
}

}  // namespace ranklaw
