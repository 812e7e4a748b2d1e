#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mevsim/distributions.hpp"
#include "mevsim/rng.hpp"
#include "mevsim/special_functions.hpp"
#include "test_support.hpp"

using mevsim::BetaKernelMax;
using mevsim::ToleranceDistribution;
using mevsim::beta_kernel_max;

TEST_CASE("log_gamma matches the C library") {
  for (double x : {0.2, 0.5, 1.0, 1.5, 2.0, 3.7, 6.0, 12.0, 40.0}) {
    CHECK(mevsim::log_gamma(x) ==
          doctest::Approx(std::lgamma(x)).epsilon(1e-13));
  }
}

TEST_CASE("regularized incomplete beta spot values") {
  // Beta(1,1) is the identity, Beta(2,2) has CDF x^2 (3 - 2x),
  // Beta(1/2,1/2) is the arcsine law.
  CHECK(mevsim::reg_inc_beta(1.0, 1.0, 0.37) == doctest::Approx(0.37).epsilon(1e-13));
  CHECK(mevsim::reg_inc_beta(2.0, 2.0, 0.3) ==
        doctest::Approx(0.3 * 0.3 * (3.0 - 0.6)).epsilon(1e-13));
  const double arcsine = 2.0 / 3.14159265358979323846 * std::asin(std::sqrt(0.2));
  CHECK(mevsim::reg_inc_beta(0.5, 0.5, 0.2) == doctest::Approx(arcsine).epsilon(1e-12));
}

TEST_CASE("cdf programmed examples") {
  CHECK(ToleranceDistribution::uniform(0, 1).cdf(0.3) == doctest::Approx(0.3));
  CHECK(ToleranceDistribution::beta(1, 1).cdf(0.7) == doctest::Approx(0.7));
  CHECK(ToleranceDistribution::truncated_normal(0.5, 0.01).cdf(0.5) ==
        doctest::Approx(0.5).epsilon(1e-12));
  // quadrature of the Beta(2,2) density 6x(1-x) over [0, 0.5]
  const auto d = ToleranceDistribution::beta(2, 2);
  const double oracle = test_support::adaptive_simpson(
      [&](double x) { return d.pdf(x); }, 0.0, 0.5);
  CHECK(oracle == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(d.cdf(0.5) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("survival examples and the exact complement identity") {
  const auto u = ToleranceDistribution::uniform(0, 1);
  CHECK(u.survival(0.3) == doctest::Approx(0.7));
  mevsim::Rng rng(7);
  const ToleranceDistribution dists[] = {
      ToleranceDistribution::beta(2.5, 4.0),
      ToleranceDistribution::uniform(0.2, 0.9),
      ToleranceDistribution::truncated_normal(0.4, 0.04),
  };
  for (const auto& d : dists) {
    CHECK(d.survival(1.0) == 0.0);
    CHECK(d.survival(0.0) == 1.0);
    for (int i = 0; i < 1000; ++i) {
      const double x = rng.uniform();
      CHECK(d.survival(x) == 1.0 - d.cdf(x));  // same floating path
    }
  }
}

TEST_CASE("cdf is monotone and agrees with quadrature of the density") {
  mevsim::Rng rng(11);
  const ToleranceDistribution dists[] = {
      ToleranceDistribution::beta(2, 2),
      ToleranceDistribution::beta(2.0, 5.0),
      ToleranceDistribution::beta(5.0, 1.5),
      ToleranceDistribution::uniform(0, 1),
      ToleranceDistribution::uniform(0.3, 0.5),
      ToleranceDistribution::truncated_normal(0.5, 0.01),
      ToleranceDistribution::truncated_normal(0.4, 0.04),
  };
  for (const auto& d : dists) {
    CHECK(d.cdf(0.0) == 0.0);
    CHECK(d.cdf(1.0) == 1.0);
    for (int i = 0; i < 150; ++i) {
      const double x = rng.uniform(1e-3, 1.0 - 1e-3);
      const double integral = test_support::adaptive_simpson(
          [&](double t) { return d.pdf(t); }, 0.0, x, 1e-11);
      CHECK(std::fabs(d.cdf(x) - integral) <= 1e-6);
      const double x2 = rng.uniform();
      const double lo = std::min(x, x2), hi = std::max(x, x2);
      CHECK(d.cdf(lo) <= d.cdf(hi));
    }
  }
}

TEST_CASE("pdf examples and endpoint behavior") {
  CHECK(ToleranceDistribution::beta(1, 1).pdf(0.42) == doctest::Approx(1.0));
  CHECK(ToleranceDistribution::beta(2, 2).pdf(0.5) == doctest::Approx(1.5));
  CHECK(ToleranceDistribution::uniform(0.3, 0.5).pdf(0.4) == doctest::Approx(5.0));
  CHECK(ToleranceDistribution::uniform(0.3, 0.5).pdf(0.6) == 0.0);
  CHECK_THROWS_AS(ToleranceDistribution::beta(0.5, 2.0).pdf(0.0), std::domain_error);
  CHECK_THROWS_AS(ToleranceDistribution::beta(2.0, 0.5).pdf(1.0), std::domain_error);
  CHECK(ToleranceDistribution::beta(3, 2).pdf(0.0) == 0.0);
}

TEST_CASE("construction rejects bad parameters") {
  CHECK_THROWS_AS(ToleranceDistribution::beta(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ToleranceDistribution::beta(1.0, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(ToleranceDistribution::uniform(0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ToleranceDistribution::uniform(0.6, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(ToleranceDistribution::uniform(-0.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ToleranceDistribution::truncated_normal(0.5, 0.0),
                  std::invalid_argument);
}

TEST_CASE("beta_kernel_max case analysis") {
  // a+b > 2 with interior critical point
  auto r = beta_kernel_max(2, 2, 0.3, 0.7);
  CHECK(r.argmax == doctest::Approx(0.5));
  CHECK(r.value == doctest::Approx(0.25).epsilon(1e-12));
  // flat kernel
  r = beta_kernel_max(1, 1, 0.2, 0.9);
  CHECK(r.value == doctest::Approx(1.0));
  // a+b < 2, critical point right of the interval: decreasing, max at p
  r = beta_kernel_max(0.5, 0.5, 0.1, 0.4);
  CHECK(r.argmax == doctest::Approx(0.1));
  CHECK(r.value == doctest::Approx(10.0 / 3.0).epsilon(1e-12));
  // monotone a+b = 2 cases
  CHECK(beta_kernel_max(1.5, 0.5, 0.2, 0.8).argmax == doctest::Approx(0.8));
  CHECK(beta_kernel_max(0.5, 1.5, 0.2, 0.8).argmax == doctest::Approx(0.2));
  CHECK_THROWS_AS(beta_kernel_max(2, 2, 0.7, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(beta_kernel_max(2, 2, 0.3, 0.3), std::invalid_argument);
}

TEST_CASE("beta_kernel_max against the grid oracle") {
  auto r = beta_kernel_max(3.0, 1.2, 0.05, 0.95);
  CHECK(std::fabs(r.value - test_support::grid_kernel_max(3.0, 1.2, 0.05, 0.95)) <=
        1e-9 * r.value);

  mevsim::Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform(0.2, 6.0);
    const double b = rng.uniform(0.2, 6.0);
    double p = rng.uniform(0.01, 0.99);
    double q = rng.uniform(0.01, 0.99);
    if (p > q) std::swap(p, q);
    if (q - p < 1e-3) q = std::min(0.99, p + 1e-3);
    const double lemma = beta_kernel_max(a, b, p, q).value;
    // 10^5-point oracle here; the acceptance suite runs the full 10^6 grid
    const double grid = test_support::grid_kernel_max(a, b, p, q, 100000);
    CHECK(std::fabs(lemma - grid) <= 1e-9 * std::max(lemma, grid));
  }
}
