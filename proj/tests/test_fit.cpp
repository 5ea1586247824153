#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "ranklaw/fit.hpp"
#include "ranklaw/synth.hpp"

using namespace ranklaw;

namespace {

// safe generating parameters per family for round-trip fitting
ParamVector roundtrip_params(Family f, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> amp(1.0, 80.0);
  std::uniform_real_distribution<double> expo(0.1, 1.5);
  std::uniform_real_distribution<double> rate(0.005, 0.05);
  std::uniform_real_distribution<double> psi(0.5, 4.0);
  switch (f) {
    case Family::zipf: return make_params(f, {amp(rng), expo(rng)});
    case Family::exponential: return make_params(f, {amp(rng), rate(rng)});
    case Family::lavalette2: return make_params(f, {amp(rng), expo(rng)});
    case Family::power_cutoff: return make_params(f, {amp(rng), expo(rng), rate(rng)});
    case Family::lavalette3: return make_params(f, {amp(rng), expo(rng), expo(rng)});
    case Family::universal_lavalette: return make_params(f, {amp(rng), expo(rng), psi(rng)});
    default: return {};
  }
}

constexpr Family kCurveFamilies[] = {Family::zipf,       Family::exponential,
                                     Family::lavalette2, Family::power_cutoff,
                                     Family::lavalette3, Family::universal_lavalette};

}  // namespace

TEST_CASE("init_guess recovers noiseless parameters exactly", "[fit]") {
  std::mt19937_64 rng(201);
  for (Family f : kCurveFamilies) {
    for (int rep = 0; rep < 5; ++rep) {
      auto truth = roundtrip_params(f, rng);
      auto series = generate(f, truth, 200);
      auto guess = init_guess(ModelSpec{f, series.size()}, series);
      for (std::size_t j = 0; j < truth.values.size(); ++j)
        REQUIRE(guess.values[j] ==
                Catch::Approx(truth.values[j]).epsilon(1e-10).margin(1e-10));
    }
  }
}

TEST_CASE("init_guess recovers a zipf pair to full precision", "[fit]") {
  auto series = generate(Family::zipf, make_params(Family::zipf, {45.0, 0.2}), 100);
  auto guess = init_guess(ModelSpec{Family::zipf, 100}, series);
  CHECK(guess.values[0] == Catch::Approx(45.0).epsilon(1e-10));
  CHECK(guess.values[1] == Catch::Approx(0.2).epsilon(1e-10));
}

TEST_CASE("init_guess on constant data gives a flat power law", "[fit]") {
  std::vector<double> x{1.0, 2.0, 3.0, 4.0}, y(4, 7.25);
  auto guess = init_guess(ModelSpec{Family::zipf, 4}, x, y);
  CHECK(guess.values[0] == Catch::Approx(7.25).epsilon(1e-12));
  CHECK(guess.values[1] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("init_guess rejects singular designs", "[fit]") {
  std::vector<double> x{1.0, 2.0}, y{3.0, 2.0};
  CHECK_THROWS_AS(init_guess(ModelSpec{Family::power_cutoff, 2}, x, y), std::runtime_error);
}

TEST_CASE("lm_fit recovers the 11/12 universal parameters from noiseless data", "[fit]") {
  auto truth = make_params(Family::universal_lavalette, {48.58, 0.206, 4.557});
  auto series = generate(Family::universal_lavalette, truth, 443);
  auto result = fit(Family::universal_lavalette, series);
  REQUIRE(result.converged);
  for (std::size_t j = 0; j < 3; ++j)
    CHECK(result.params.values[j] == Catch::Approx(truth.values[j]).epsilon(1e-8));
  CHECK(result.r_squared == Catch::Approx(1.0).margin(1e-12));
  CHECK(result.dof == 442);
  CHECK(result.dof_conventional == 440);
}

TEST_CASE("lm_fit handles 1% multiplicative noise", "[fit]") {
  auto truth = make_params(Family::universal_lavalette, {48.58, 0.206, 4.557});
  NoiseSpec noise{NoiseKind::multiplicative_gaussian, 0.01, 424242};
  auto series = generate(Family::universal_lavalette, truth, 443, noise);
  auto result = fit(Family::universal_lavalette, series);
  REQUIRE(result.converged);
  for (std::size_t j = 0; j < 3; ++j)
    CHECK(result.params.values[j] == Catch::Approx(truth.values[j]).epsilon(0.05));
  CHECK(result.r_squared > 0.98);
}

TEST_CASE("lm_fit at an already-optimal init converges without stepping", "[fit]") {
  auto truth = make_params(Family::zipf, {20.0, 0.8});
  auto series = generate(Family::zipf, truth, 50);
  auto result = lm_fit(ModelSpec{Family::zipf, 50}, series, truth);
  CHECK(result.converged);
  CHECK(result.iterations == 0);
  CHECK(result.termination == Termination::gradient_small);
  CHECK(result.chi_square == Catch::Approx(0.0).margin(1e-18));
}

TEST_CASE("lm_fit validates its inputs", "[fit]") {
  auto series = generate(Family::zipf, make_params(Family::zipf, {20.0, 0.8}), 10);
  ParamVector bad{{1.0}, default_bounds(Family::zipf)};
  CHECK_THROWS_AS(lm_fit(ModelSpec{Family::zipf, 10}, series, bad), std::invalid_argument);
  ParamVector oob{{-1.0, 0.5}, default_bounds(Family::zipf)};
  CHECK_THROWS_AS(lm_fit(ModelSpec{Family::zipf, 10}, series, oob), std::invalid_argument);
}

TEST_CASE("cross-family fits rank the generating family first", "[fit]") {
  auto series = generate(Family::exponential, make_params(Family::exponential, {50.0, 0.03}), 150);
  auto exp_fit = fit(Family::exponential, series);
  auto zipf_fit = fit(Family::zipf, series);
  CHECK(zipf_fit.r_squared < exp_fit.r_squared);
}

TEST_CASE("three points determine a three-parameter family exactly", "[fit]") {
  auto truth = make_params(Family::universal_lavalette, {10.0, 0.4, 1.1});
  auto series = generate(Family::universal_lavalette, truth, 3);
  auto result = fit(Family::universal_lavalette, series);
  CHECK(result.converged);
  CHECK(result.chi_square == Catch::Approx(0.0).margin(1e-16));
}

TEST_CASE("accepted-step SSR sequence never increases", "[fit]") {
  std::mt19937_64 rng(211);
  for (Family f : kCurveFamilies) {
    auto truth = roundtrip_params(f, rng);
    NoiseSpec noise{NoiseKind::multiplicative_gaussian, 0.05, rng()};
    auto series = generate(f, truth, 120, noise);
    auto result = fit(f, series);
    REQUIRE(result.ssr_trace.size() >= 1);
    for (std::size_t i = 1; i < result.ssr_trace.size(); ++i)
      REQUIRE(result.ssr_trace[i] <= result.ssr_trace[i - 1]);
    CHECK(result.chi_square <= result.ssr_trace.front());
  }
}

TEST_CASE("fitting scaled sizes scales the amplitude and chi_square only", "[fit]") {
  std::mt19937_64 rng(223);
  std::uniform_real_distribution<double> factor(0.1, 40.0);
  for (int rep = 0; rep < 5; ++rep) {
    const Family f = kCurveFamilies[rep % 6];
    auto truth = roundtrip_params(f, rng);
    NoiseSpec noise{NoiseKind::multiplicative_gaussian, 0.02, 1000 + static_cast<std::uint64_t>(rep)};
    auto series = generate(f, truth, 100, noise);

    const double alpha = factor(rng);
    std::vector<RawRecord> scaled;
    for (const auto& e : series.entries()) scaled.push_back({e.label, alpha * e.size});
    auto series_scaled = rank_series(std::move(scaled));

    auto base = fit(f, series);
    auto scaled_fit = fit(f, series_scaled);
    REQUIRE(base.converged);
    REQUIRE(scaled_fit.converged);
    CHECK(scaled_fit.params.values[0] == Catch::Approx(alpha * base.params.values[0]).epsilon(1e-6));
    for (std::size_t j = 1; j < base.params.values.size(); ++j)
      CHECK(scaled_fit.params.values[j] ==
            Catch::Approx(base.params.values[j]).epsilon(1e-6).margin(1e-8));
    CHECK(scaled_fit.chi_square == Catch::Approx(alpha * alpha * base.chi_square).epsilon(1e-6));
    CHECK(scaled_fit.r_squared == Catch::Approx(base.r_squared).epsilon(1e-8));
  }
}

TEST_CASE("noiseless generate-then-fit recovers every family", "[fit]") {
  std::mt19937_64 rng(227);
  for (Family f : kCurveFamilies) {
    for (int rep = 0; rep < 3; ++rep) {
      auto truth = roundtrip_params(f, rng);
      auto series = generate(f, truth, 150);
      auto result = fit(f, series);
      REQUIRE(result.converged);
      for (std::size_t j = 0; j < truth.values.size(); ++j)
        REQUIRE(result.params.values[j] ==
                Catch::Approx(truth.values[j]).epsilon(1e-6).margin(1e-9));
    }
  }
}

TEST_CASE("r_squared in FitResult matches a direct two-pass computation", "[fit]") {
  auto truth = make_params(Family::lavalette2, {30.0, 0.6});
  NoiseSpec noise{NoiseKind::multiplicative_gaussian, 0.03, 77};
  auto series = generate(Family::lavalette2, truth, 80, noise);
  auto result = fit(Family::lavalette2, series);

  const int n = series.size();
  std::vector<double> pred, obs;
  for (int r = 1; r <= n; ++r) {
    obs.push_back(series.at_rank(r).size);
    pred.push_back(eval(result.model, result.params, r));
  }
  double mean = 0.0;
  for (double v : obs) mean += v;
  mean /= n;
  double ssr = 0.0, tss = 0.0;
  for (int i = 0; i < n; ++i) {
    ssr += (obs[i] - pred[i]) * (obs[i] - pred[i]);
    tss += (obs[i] - mean) * (obs[i] - mean);
  }
  CHECK(result.chi_square == Catch::Approx(ssr).epsilon(1e-12));
  CHECK(result.r_squared == Catch::Approx(1.0 - ssr / tss).epsilon(1e-12));
}

TEST_CASE("universal series overload fits in u directly", "[fit]") {
  auto truth = make_params(Family::universal_lavalette, {12.0, 0.3, 2.2});
  auto ranked = generate(Family::universal_lavalette, truth, 99);
  auto universal = to_universal(ranked);
  auto result = fit(Family::universal_lavalette, universal);
  REQUIRE(result.converged);
  for (std::size_t j = 0; j < 3; ++j)
    CHECK(result.params.values[j] == Catch::Approx(truth.values[j]).epsilon(1e-7));
  CHECK_THROWS_AS(fit(Family::zipf, universal), std::invalid_argument);
}

TEST_CASE("zeta_pareto fit recovers the exponent", "[fit]") {
  // sizes proportional to the pmf over k = 1..N
  auto truth = make_params(Family::zeta_pareto, {2.5});
  auto series = generate(Family::zeta_pareto, truth, 60);
  auto result = fit(Family::zeta_pareto, series);
  REQUIRE(result.converged);
  CHECK(result.params.values[0] == Catch::Approx(2.5).epsilon(1e-6));
}
