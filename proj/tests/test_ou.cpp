#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "ousg/errors.hpp"
#include "ousg/ou_process.hpp"

using namespace ousg;

TEST_CASE("sigma = 0 degenerates to exact exponential decay") {
  const OuParams p{0.1, 0.0, 0.0};
  Rng rng(7);
  const TimeSeries xs = generate_ou_from(p, 1.0, 50, rng);
  const double decay = std::exp(-0.1);
  for (std::size_t t = 1; t < xs.size(); ++t) {
    CHECK(xs[t] == doctest::Approx(xs[t - 1] * decay).epsilon(1e-15));
    CHECK(std::abs(xs[t]) < std::abs(xs[t - 1]));  // monotone decay toward 0
  }
}

TEST_CASE("long-run variance matches the stationary value") {
  const OuParams p{0.025, 0.5, 0.0};
  Rng rng = seeded_rng(11, kSeedTest);
  const TimeSeries xs = generate_ou(p, 1000000, rng);
  CHECK(oracle::variance(xs) == doctest::Approx(5.0).epsilon(0.05));
}

TEST_CASE("lag-1 autocorrelation matches e^{-theta}") {
  const OuParams p{0.025, 0.5, 0.0};
  Rng rng = seeded_rng(13, kSeedTest);
  const TimeSeries xs = generate_ou(p, 1000000, rng);
  const double m = oracle::mean(xs);
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t + 1 < xs.size(); ++t) num += (xs[t] - m) * (xs[t + 1] - m);
  for (double x : xs) den += (x - m) * (x - m);
  CHECK(num / den == doctest::Approx(std::exp(-0.025)).epsilon(0.02));
}

TEST_CASE("conditional moments of one exact step") {
  const OuParams p{0.04, 0.7, 0.3};
  const double x0 = 2.5;
  const std::size_t n = 100000;
  Rng rng(99);
  std::vector<double> draws(n);
  for (double& d : draws) d = ou_step(p, x0, rng);

  const double want_mean = x0 * std::exp(-p.theta) + p.mu * (1.0 - std::exp(-p.theta));
  const double want_var =
      p.sigma * p.sigma * (1.0 - std::exp(-2.0 * p.theta)) / (2.0 * p.theta);
  const double got_mean = oracle::mean(draws);
  const double got_var = oracle::variance(draws);
  // 3-sigma Monte Carlo bounds
  const double mean_tol = 3.0 * std::sqrt(want_var / n);
  CHECK(std::abs(got_mean - want_mean) < mean_tol);
  const double var_tol = 3.0 * want_var * std::sqrt(2.0 / n);
  CHECK(std::abs(got_var - want_var) < var_tol);
}

TEST_CASE("identical seeds give identical series") {
  const OuParams p{0.02, 0.4, 0.0};
  Rng a(123), b(123);
  const TimeSeries xa = generate_ou(p, 500, a);
  const TimeSeries xb = generate_ou(p, 500, b);
  CHECK(xa == xb);
}

TEST_CASE("parameter sampling") {
  Rng rng(5);
  SUBCASE("degenerate range is a point mass") {
    const ParamRanges r{0.025, 0.025, 0.5, 0.5};
    for (int i = 0; i < 20; ++i) {
      const OuParams p = sample_params(r, rng);
      CHECK(p.theta == 0.025);
      CHECK(p.sigma == 0.5);
      CHECK(p.mu == 0.0);
    }
  }
  SUBCASE("uniform draws stay in range and average to the midpoint") {
    const ParamRanges r;
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const OuParams p = sample_params(r, rng);
      CHECK(p.theta >= 0.02);
      CHECK(p.theta <= 0.03);
      CHECK(p.sigma >= 0.4);
      CHECK(p.sigma <= 0.6);
      sum += p.theta;
    }
    CHECK(sum / n == doctest::Approx(0.025).epsilon(0.01));
  }
}

TEST_CASE("invalid inputs are rejected") {
  Rng rng(1);
  CHECK_THROWS_AS(generate_ou(OuParams{-1.0, 0.5, 0.0}, 10, rng), ConfigError);
  CHECK_THROWS_AS(generate_ou(OuParams{0.025, -0.5, 0.0}, 10, rng), ConfigError);
  CHECK_THROWS_AS(generate_ou(OuParams{0.025, 0.5, 0.0}, 1, rng), ConfigError);
  CHECK_THROWS_AS(sample_params(ParamRanges{0.0, 0.03, 0.4, 0.6}, rng), ConfigError);
  CHECK_THROWS_AS(sample_params(ParamRanges{0.03, 0.02, 0.4, 0.6}, rng), ConfigError);
}
