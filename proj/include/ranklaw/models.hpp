#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ranklaw {

// Rank-size model families. All are evaluated at a rank r (a real in
// [1, N]) except universal_lavalette, which lives on u in (0,1), and
// zeta_pareto, which is a pmf over positive integers k.
//
//   zipf                 a * r^(-alpha)
//   zeta_pareto          k^(-gamma) / zeta(gamma),        gamma > 1
//   exponential          b * exp(-beta * r)
//   lavalette2           kappa2 * [N r / (N - r + 1)]^(-gamma)
//   power_cutoff         c * r^(-lambda) * exp(-zeta_rate * r)
//   lavalette3           kappa3 * (N r)^(-gamma) * (N - r + 1)^(xi)
//   universal_lavalette  lambda_hat * u^(-phi) * (1 - u)^(psi)
enum class Family {
  zipf,
  zeta_pareto,
  exponential,
  lavalette2,
  power_cutoff,
  lavalette3,
  universal_lavalette,
};

inline constexpr std::array<Family, 7> all_families = {
    Family::zipf,         Family::zeta_pareto, Family::exponential,        Family::lavalette2,
    Family::power_cutoff, Family::lavalette3,  Family::universal_lavalette};

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::zipf: return "zipf";
    case Family::zeta_pareto: return "zeta_pareto";
    case Family::exponential: return "exponential";
    case Family::lavalette2: return "lavalette2";
    case Family::power_cutoff: return "power_cutoff";
    case Family::lavalette3: return "lavalette3";
    case Family::universal_lavalette: return "universal_lavalette";
  }
  return "?";
}

inline std::optional<Family> family_from_name(std::string_view name) {
  for (Family f : all_families)
    if (family_name(f) == name) return f;
  return std::nullopt;
}

inline std::size_t param_count(Family f) {
  switch (f) {
    case Family::zeta_pareto: return 1;
    case Family::zipf:
    case Family::exponential:
    case Family::lavalette2: return 2;
    default: return 3;
  }
}

// ASCII parameter names, in evaluation order.
inline std::vector<std::string_view> param_names(Family f) {
  switch (f) {
    case Family::zipf: return {"a", "alpha"};
    case Family::zeta_pareto: return {"gamma"};
    case Family::exponential: return {"b", "beta"};
    case Family::lavalette2: return {"kappa2", "gamma"};
    case Family::power_cutoff: return {"c", "lambda", "zeta_rate"};
    case Family::lavalette3: return {"kappa3", "gamma", "xi"};
    case Family::universal_lavalette: return {"lambda_hat", "phi", "psi"};
  }
  return {};
}

// A family plus the series length N where the formula needs it
// (lavalette2, lavalette3; universal_lavalette only for rank mapping).
struct ModelSpec {
  Family family = Family::zipf;
  int n_context = 0;
};

struct ParamBounds {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

// Amplitudes must stay positive; zeta_pareto's gamma must stay above 1.
// Exponents are unbounded.
inline std::vector<ParamBounds> default_bounds(Family f) {
  const double inf = std::numeric_limits<double>::infinity();
  const double pos = std::numeric_limits<double>::min();
  std::vector<ParamBounds> b(param_count(f));
  if (f == Family::zeta_pareto) {
    b[0] = {1.0 + 1e-12, inf};
  } else {
    b[0] = {pos, inf};  // amplitude
  }
  return b;
}

struct ParamVector {
  std::vector<double> values;
  std::vector<ParamBounds> bounds;

  bool within_bounds() const {
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] < bounds[i].lower || values[i] > bounds[i].upper) return false;
    return true;
  }
};

// Builds a ParamVector with the family's default bounds; validates length
// and bound compliance.
inline ParamVector make_params(Family f, std::vector<double> values) {
  if (values.size() != param_count(f))
    throw std::invalid_argument(std::string(family_name(f)) + " takes " +
                                std::to_string(param_count(f)) + " parameters, got " +
                                std::to_string(values.size()));
  ParamVector p{std::move(values), default_bounds(f)};
  if (!p.within_bounds()) throw std::invalid_argument("parameter out of bounds for " + std::string(family_name(f)));
  return p;
}

// ---------------------------------------------------------------------------
// Riemann zeta

namespace detail {

// Term count for the Euler-Maclaurin evaluation: pick M so the first
// omitted correction (the B8 term) is below tol.
inline std::size_t zeta_term_count(double s, double tol) {
  double prod = 1.0;
  for (int i = 0; i < 7; ++i) prod *= (s + i);
  // |B8|/8! = (1/30)/40320
  const double c = prod / (30.0 * 40320.0 * tol);
  double m = (c > 1.0) ? std::pow(c, 1.0 / (s + 7.0)) : 1.0;
  m = std::min(std::max(2.0 * m, 16.0), 4.0e6);
  return static_cast<std::size_t>(m);
}

}  // namespace detail

// zeta(s) = sum_{k>=1} k^(-s) for s > 1, by direct summation of the first
// M terms plus an Euler-Maclaurin tail through the B6 correction. The
// result is accurate to roughly tol (absolute).
inline double zeta(double s, double tol = 1e-12) {
  if (!(s > 1.0)) throw std::domain_error("zeta requires s > 1");
  if (!(tol > 0.0)) throw std::invalid_argument("zeta tolerance must be positive");
  const std::size_t m = detail::zeta_term_count(s, tol);
  const double dm = static_cast<double>(m);

  double sum = 0.0;
  for (std::size_t k = m - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);

  const double m_pow = std::pow(dm, -s);
  double tail = dm * m_pow / (s - 1.0);  // integral term M^(1-s)/(s-1)
  tail += 0.5 * m_pow;
  tail += s * m_pow / dm / 12.0;
  tail -= s * (s + 1.0) * (s + 2.0) * m_pow / (dm * dm * dm) / 720.0;
  tail += s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * m_pow / std::pow(dm, 5.0) / 30240.0;
  return sum + tail;
}

namespace detail {

// d/ds zeta(s), from differentiating the Euler-Maclaurin form above.
inline double zeta_deriv(double s, double tol = 1e-12) {
  if (!(s > 1.0)) throw std::domain_error("zeta_deriv requires s > 1");
  const std::size_t m = zeta_term_count(s, tol);
  const double dm = static_cast<double>(m);
  const double lm = std::log(dm);

  double sum = 0.0;
  for (std::size_t k = m - 1; k >= 2; --k) {
    const double dk = static_cast<double>(k);
    sum -= std::log(dk) * std::pow(dk, -s);
  }

  const double m_pow = std::pow(dm, -s);
  const double t1 = dm * m_pow / (s - 1.0);
  const double t2 = 0.5 * m_pow;
  const double t3 = s * m_pow / dm / 12.0;
  const double t4 = -s * (s + 1.0) * (s + 2.0) * m_pow / (dm * dm * dm) / 720.0;
  const double t5 = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * m_pow / std::pow(dm, 5.0) / 30240.0;
  double d = -t1 * (lm + 1.0 / (s - 1.0));
  d += -t2 * lm;
  d += t3 * (1.0 / s - lm);
  d += t4 * (1.0 / s + 1.0 / (s + 1.0) + 1.0 / (s + 2.0) - lm);
  d += t5 * (1.0 / s + 1.0 / (s + 1.0) + 1.0 / (s + 2.0) + 1.0 / (s + 3.0) + 1.0 / (s + 4.0) - lm);
  return sum + d;
}

}  // namespace detail

// Discrete Pareto pmf p(k) = k^(-gamma)/zeta(gamma) over k = 1, 2, ...
inline double zeta_pareto_pmf(std::int64_t k, double gamma) {
  if (k < 1) throw std::domain_error("zeta_pareto_pmf requires k >= 1");
  if (!(gamma > 1.0)) throw std::domain_error("zeta_pareto_pmf requires gamma > 1");
  return std::pow(static_cast<double>(k), -gamma) / zeta(gamma);
}

// Amplitude estimate for a power law normalized as a discrete Pareto:
// a = k_max / zeta(gamma).
inline double zipf_amplitude_estimate(double k_max, double gamma) {
  if (!(gamma > 1.0)) throw std::domain_error("zipf_amplitude_estimate requires gamma > 1");
  return k_max / zeta(gamma);
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

// Non-throwing evaluation; may return a non-finite value on overflow or
// NaN outside the domain. The optimizer uses this path so that a wild
// trial step is rejected instead of aborting the fit.
inline double eval_raw(const ModelSpec& model, std::span<const double> p, double x) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  switch (model.family) {
    case Family::zipf:
      if (x < 1.0) return nan;
      return p[0] * std::pow(x, -p[1]);
    case Family::zeta_pareto:
      if (x < 1.0 || !(p[0] > 1.0)) return nan;
      return std::pow(x, -p[0]) / zeta(p[0]);
    case Family::exponential:
      if (x < 1.0) return nan;
      return p[0] * std::exp(-p[1] * x);
    case Family::lavalette2: {
      const double n = static_cast<double>(model.n_context);
      if (model.n_context < 1 || x < 1.0 || x > n) return nan;
      return p[0] * std::pow(n * x / (n - x + 1.0), -p[1]);
    }
    case Family::power_cutoff:
      if (x < 1.0) return nan;
      return p[0] * std::pow(x, -p[1]) * std::exp(-p[2] * x);
    case Family::lavalette3: {
      const double n = static_cast<double>(model.n_context);
      if (model.n_context < 1 || x < 1.0 || x > n) return nan;
      return p[0] * std::pow(n * x, -p[1]) * std::pow(n - x + 1.0, p[2]);
    }
    case Family::universal_lavalette:
      if (!(x > 0.0) || !(x < 1.0)) return nan;
      return p[0] * std::pow(x, -p[1]) * std::pow(1.0 - x, p[2]);
  }
  return nan;
}

}  // namespace detail

// Evaluates the model at x (a rank, or u for universal_lavalette).
// Throws on x outside the family's domain and on overflow.
inline double eval(const ModelSpec& model, const ParamVector& params, double x) {
  if (params.values.size() != param_count(model.family))
    throw std::invalid_argument("parameter count mismatch for " + std::string(family_name(model.family)));
  const double y = detail::eval_raw(model, params.values, x);
  if (std::isnan(y)) throw std::domain_error("x outside the domain of " + std::string(family_name(model.family)));
  if (!std::isfinite(y)) throw std::range_error("model value overflows");
  return y;
}

// Gradient of ln(eval) with respect to the parameters, evaluated at x.
inline std::vector<double> log_jacobian(const ModelSpec& model, const ParamVector& params, double x) {
  eval(model, params, x);  // domain and overflow checks
  const auto& p = params.values;
  switch (model.family) {
    case Family::zipf: return {1.0 / p[0], -std::log(x)};
    case Family::zeta_pareto: return {-std::log(x) - detail::zeta_deriv(p[0]) / zeta(p[0])};
    case Family::exponential: return {1.0 / p[0], -x};
    case Family::lavalette2: {
      const double n = static_cast<double>(model.n_context);
      return {1.0 / p[0], -std::log(n * x / (n - x + 1.0))};
    }
    case Family::power_cutoff: return {1.0 / p[0], -std::log(x), -x};
    case Family::lavalette3: {
      const double n = static_cast<double>(model.n_context);
      return {1.0 / p[0], -std::log(n * x), std::log(n - x + 1.0)};
    }
    case Family::universal_lavalette: return {1.0 / p[0], -std::log(x), std::log(1.0 - x)};
  }
  return {};
}

// ---------------------------------------------------------------------------
// universal_lavalette helpers

// d ln y / d ln u for the universal form: -phi - psi * u/(1-u).
// At u = 1/2 this equals -(phi + psi).
inline double central_log_slope(const ParamVector& universal_params, double u) {
  if (universal_params.values.size() != 3) throw std::invalid_argument("expected universal_lavalette parameters");
  if (!(u > 0.0) || !(u < 1.0)) throw std::domain_error("u must lie in (0,1)");
  const double phi = universal_params.values[1];
  const double psi = universal_params.values[2];
  return -phi - psi * u / (1.0 - u);
}

// The linear-scale relative derivative (dy/du)/y at u = 1/2, which equals
// -2(phi + psi). Note this is twice the log-log slope at the same point.
inline double central_relative_derivative(const ParamVector& universal_params) {
  if (universal_params.values.size() != 3) throw std::invalid_argument("expected universal_lavalette parameters");
  const double phi = universal_params.values[1];
  const double psi = universal_params.values[2];
  return -2.0 * (phi + psi);
}

// With psi = 0 the universal form collapses to a pure power law in rank:
// a = lambda_hat * (N+1)^phi, alpha = phi.
inline ParamVector reduce_to_power_law(const ParamVector& universal_params, int n) {
  if (universal_params.values.size() != 3) throw std::invalid_argument("expected universal_lavalette parameters");
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (universal_params.values[2] != 0.0) throw std::invalid_argument("reduction requires psi == 0 exactly");
  const double lambda_hat = universal_params.values[0];
  const double phi = universal_params.values[1];
  return make_params(Family::zipf, {lambda_hat * std::pow(static_cast<double>(n) + 1.0, phi), phi});
}

}  // namespace ranklaw
