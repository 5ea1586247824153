#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "ranklaw/synth.hpp"
#include "ranklaw/fit.hpp"

using namespace ranklaw;

TEST_CASE("generate with sigma 0 reproduces the model curve", "[synth]") {
  auto p = make_params(Family::zipf, {50.0, 0.4});
  auto series = generate(Family::zipf, p, 40);
  for (int r = 1; r <= 40; ++r)
    CHECK(series.at_rank(r).size == Catch::Approx(eval({Family::zipf, 40}, p, r)).epsilon(1e-15));
}

TEST_CASE("generate is deterministic in the seed", "[synth]") {
  auto p = make_params(Family::universal_lavalette, {20.0, 0.3, 2.0});
  NoiseSpec noise{NoiseKind::multiplicative_gaussian, 0.05, 9001};
  auto a = generate(Family::universal_lavalette, p, 64, noise);
  auto b = generate(Family::universal_lavalette, p, 64, noise);
  std::ostringstream sa, sb;
  write_series(a, sa);
  write_series(b, sb);
  CHECK(sa.str() == sb.str());

  NoiseSpec other = noise;
  other.seed = 9002;
  auto c = generate(Family::universal_lavalette, p, 64, other);
  std::ostringstream sc;
  write_series(c, sc);
  CHECK(sa.str() != sc.str());
}

TEST_CASE("generated series keeps the size multiset under re-sorting", "[synth]") {
  auto p = make_params(Family::exponential, {5.0, 0.001});
  NoiseSpec noise{NoiseKind::multiplicative_gaussian, 0.40, 31337};  // enough to shuffle ranks
  auto series = generate(Family::exponential, p, 50, noise);
  for (int r = 2; r <= 50; ++r)
    REQUIRE(series.at_rank(r).size <= series.at_rank(r - 1).size);
  for (const auto& e : series.entries()) REQUIRE(e.size > 0.0);
}

TEST_CASE("generate labels are zero-padded and stable", "[synth]") {
  auto p = make_params(Family::zipf, {5.0, 0.2});
  auto series = generate(Family::zipf, p, 12);
  CHECK(series.at_rank(1).label == "item-0001");
  CHECK(series.at_rank(12).label == "item-0012");
}

TEST_CASE("single-segment splice equals generate", "[synth]") {
  auto p = make_params(Family::lavalette3, {30.0, 0.5, 1.5});
  SpliceSpec splice{{{Family::lavalette3, p, 1, 77}}, true};
  auto a = generate_spliced(splice, 77);
  auto b = generate(Family::lavalette3, p, 77);
  for (int r = 1; r <= 77; ++r)
    CHECK(a.at_rank(r).size == Catch::Approx(b.at_rank(r).size).epsilon(1e-15));
}

TEST_CASE("two-segment splice joins continuously", "[synth]") {
  SpliceSpec splice;
  splice.segments.push_back({Family::zipf, make_params(Family::zipf, {100.0, 0.17}), 1, 6});
  splice.segments.push_back(
      {Family::universal_lavalette, make_params(Family::universal_lavalette, {10.0, 0.30, 3.68}), 7, 443});
  auto series = generate_spliced(splice, 443);

  // the value at the first middle rank continues the top law's own ratio
  const ModelSpec top{Family::zipf, 443};
  const auto& tp = splice.segments[0].params;
  const double expected = series.at_rank(6).size * (eval(top, tp, 7.0) / eval(top, tp, 6.0));
  CHECK(series.at_rank(7).size == Catch::Approx(expected).epsilon(1e-12));
  // sizes still monotone
  for (int r = 2; r <= 443; ++r) REQUIRE(series.at_rank(r).size <= series.at_rank(r - 1).size);
}

TEST_CASE("splice validates its intervals", "[synth]") {
  auto p = make_params(Family::zipf, {1.0, 0.1});
  CHECK_THROWS_AS(generate_spliced({{{Family::zipf, p, 1, 5}}, true}, 10), std::invalid_argument);
  CHECK_THROWS_AS(generate_spliced({{{Family::zipf, p, 2, 10}}, true}, 10), std::invalid_argument);
  SpliceSpec gap;
  gap.segments.push_back({Family::zipf, p, 1, 4});
  gap.segments.push_back({Family::zipf, p, 6, 10});
  CHECK_THROWS_AS(generate_spliced(gap, 10), std::invalid_argument);
}

TEST_CASE("spliced middle segment is recoverable by a reduced-series fit", "[synth]") {
  // the middle law runs from its start rank to the series end, so a fit on
  // u' = (r - r1)/(N - r1 + 1) sees exactly the generating parameters
  SpliceSpec splice;
  splice.segments.push_back({Family::zipf, make_params(Family::zipf, {100.0, 0.17}), 1, 6});
  splice.segments.push_back(
      {Family::universal_lavalette, make_params(Family::universal_lavalette, {10.0, 0.30, 3.68}), 7, 443});
  auto series = generate_spliced(splice, 443);

  std::vector<double> x, y;
  const int r1 = 6, reduced = 443 - r1;
  for (int r = r1 + 1; r <= 443; ++r) {
    x.push_back((r - r1) / (reduced + 1.0));
    y.push_back(series.at_rank(r).size);
  }
  const ModelSpec m{Family::universal_lavalette, reduced};
  auto guess = init_guess(m, x, y);
  CHECK(guess.values[1] == Catch::Approx(0.30).epsilon(1e-9));
  CHECK(guess.values[2] == Catch::Approx(3.68).epsilon(1e-9));
}
