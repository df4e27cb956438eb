#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "dpaudit/errors.hpp"
#include "dpaudit/rng.hpp"
#include "dpaudit/stats.hpp"

using namespace dpaudit;
namespace st = dpaudit::stats;

namespace {
// Independent small-n oracle: direct product in extended precision.
long double binom_pmf_ld(std::uint64_t k, std::uint64_t n, long double p) {
  long double c = 1.0L;
  for (std::uint64_t i = 0; i < k; ++i)
    c = c * static_cast<long double>(n - i) / static_cast<long double>(i + 1);
  return c * std::pow(p, static_cast<long double>(k)) *
         std::pow(1.0L - p, static_cast<long double>(n - k));
}
}  // namespace

TEST_CASE("standard normal cdf basics") {
  CHECK(st::std_normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(st::std_normal_cdf(1.959964) == doctest::Approx(0.975).epsilon(1e-6));
  CHECK(st::std_normal_cdf(-1.959964) == doctest::Approx(0.025).epsilon(1e-6));
  // Monotone over a coarse grid.
  double prev = 0.0;
  for (double x = -8.0; x <= 8.0; x += 0.25) {
    const double c = st::std_normal_cdf(x);
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("inverse normal cdf round trips") {
  for (int i = -5; i <= 5; ++i) {
    const double x = static_cast<double>(i);
    CHECK(std::abs(st::std_normal_inv_cdf(st::std_normal_cdf(x)) - x) <= 1e-8);
  }
  // Functional inverse in probability space, |cdf(inv(u)) - u| <= 1e-10.
  for (double u = 0.0005; u < 1.0; u += 0.0103) {
    CHECK(std::abs(st::std_normal_cdf(st::std_normal_inv_cdf(u)) - u) <= 1e-10);
  }
  for (double u : {1e-14, 1e-10, 1e-6, 1.0 - 1e-12, 1.0 - 1e-7}) {
    CHECK(std::abs(st::std_normal_cdf(st::std_normal_inv_cdf(u)) - u) <=
          1e-10 * std::max(1.0, u));
  }
  CHECK_THROWS_AS((void)st::std_normal_inv_cdf(0.0), Error);
  CHECK_THROWS_AS((void)st::std_normal_inv_cdf(1.0), Error);
  CHECK_THROWS_AS((void)st::std_normal_inv_cdf(-0.2), Error);
}

TEST_CASE("noncentral chi-square(1) cdf closed form") {
  CHECK(st::noncentral_chisq1_cdf(0.0, 3.0) == 0.0);
  // Central case through the normal quantile: P(chi2_1 <= 3.841459) = 0.95.
  CHECK(st::noncentral_chisq1_cdf(3.841459, 0.0) ==
        doctest::Approx(0.95).epsilon(1e-6));
  // nc = 4 (offset 2): Phi(0) - Phi(-4).
  const double expected = 0.5 - st::std_normal_cdf(-4.0);
  CHECK(st::noncentral_chisq1_cdf(4.0, 4.0) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("noncentral chi-square(1) inverse cdf") {
  // Central 95% quantile pinned to 3.841459 within 1e-5.
  CHECK(std::abs(st::noncentral_chisq1_inv_cdf(0.95, 0.0) - 3.841459) <= 1e-5);
  for (double nc : {0.0, 1.0, 10.0}) {
    double prev = 0.0;
    for (double u : {0.01, 0.1, 0.5, 0.9, 0.99}) {
      const double c = st::noncentral_chisq1_inv_cdf(u, nc);
      CHECK(std::abs(st::noncentral_chisq1_cdf(c, nc) - u) <= 1e-9);
      CHECK(c > prev);  // strictly monotone in u
      prev = c;
    }
  }
  CHECK_THROWS_AS((void)st::noncentral_chisq1_inv_cdf(0.0, 1.0), Error);
}

TEST_CASE("binomial log pmf against the extended-precision oracle") {
  CHECK(st::log_binomial_pmf(0, 10, 0.0) == 0.0);
  CHECK(st::log_binomial_pmf(3, 10, 0.0) == -std::numeric_limits<double>::infinity());
  CHECK(st::log_binomial_pmf(10, 10, 1.0) == 0.0);
  CHECK(st::log_binomial_pmf(1, 2, 0.5) ==
        doctest::Approx(std::log(0.5)).epsilon(1e-14));
  CHECK_THROWS_AS((void)st::log_binomial_pmf(3, 2, 0.5), Error);

  for (std::uint64_t n : {2ull, 7ull, 25ull, 60ull, 100ull}) {
    for (double p : {0.07, 0.4, 0.5, 0.93}) {
      for (std::uint64_t k = 0; k <= n; k += (n > 20 ? 7 : 1)) {
        const double expected = static_cast<double>(
            std::log(binom_pmf_ld(k, n, static_cast<long double>(p))));
        CHECK(st::log_binomial_pmf(k, n, p) ==
              doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("truncated normal density") {
  const double inf = std::numeric_limits<double>::infinity();
  // Half-normal: twice the untruncated density on the positive axis.
  for (double x : {0.1, 0.5, 2.0}) {
    const double var = 2.5;
    const double plain = std::exp(-0.5 * x * x / var) /
                         std::sqrt(2.0 * M_PI * var);
    CHECK(st::log_truncnormal_pdf(x, 0.0, inf, 0.0, var) ==
          doctest::Approx(std::log(2.0 * plain)).epsilon(1e-12));
  }
  CHECK(st::log_truncnormal_pdf(-0.1, 0.0, inf, 0.0, 1.0) == -inf);
  // Normalizes over a finite window (trapezoid check).
  const double lo = -0.3, hi = 1.7;
  double mass = 0.0;
  const int cells = 20000;
  for (int i = 0; i < cells; ++i) {
    const double x = lo + (hi - lo) * (i + 0.5) / cells;
    mass += std::exp(st::log_truncnormal_pdf(x, lo, hi, 0.4, 0.7)) *
            (hi - lo) / cells;
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS((void)st::log_truncnormal_pdf(0.0, 1.0, -1.0, 0.0, 1.0), Error);
  CHECK_THROWS_AS((void)st::log_truncnormal_pdf(0.0, 0.0, 1.0, 0.0, -1.0), Error);
}

TEST_CASE("beta log pdf") {
  CHECK(st::beta_log_pdf(0.5, 1.0, 1.0) == 0.0);
  CHECK(st::beta_log_pdf(0.99, 1.0, 1.0) == 0.0);
  // Beta(2,2): density 6 x (1-x).
  CHECK(st::beta_log_pdf(0.3, 2.0, 2.0) ==
        doctest::Approx(std::log(6.0 * 0.3 * 0.7)).epsilon(1e-12));
  CHECK(st::beta_log_pdf(-0.1, 2.0, 2.0) ==
        -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS((void)st::beta_log_pdf(0.5, 0.0, 1.0), Error);
}

TEST_CASE("bivariate normal log density") {
  const std::array<double, 2> mean{1.0, -2.0};
  const std::array<std::array<double, 2>, 2> diag{{{2.0, 0.0}, {0.0, 0.5}}};
  // At the mean: -log(2 pi sqrt(det)).
  CHECK(st::log_bvn_pdf(mean, mean, diag) ==
        doctest::Approx(-std::log(2.0 * M_PI * std::sqrt(1.0))).epsilon(1e-12));
  // Diagonal case equals the sum of the univariate log densities.
  const std::array<double, 2> x{0.3, -1.1};
  const auto uni = [](double v, double mu, double var) {
    return -0.5 * (v - mu) * (v - mu) / var - 0.5 * std::log(2.0 * M_PI * var);
  };
  CHECK(st::log_bvn_pdf(x, mean, diag) ==
        doctest::Approx(uni(0.3, 1.0, 2.0) + uni(-1.1, -2.0, 0.5)).epsilon(1e-12));
  // Correlated case integrates to one (grid quadrature over +-6 sigma).
  const std::array<std::array<double, 2>, 2> cov{{{1.0, 0.6}, {0.6, 0.8}}};
  double mass = 0.0;
  const int cells = 400;
  const double half = 6.0, step = 2.0 * half / cells;
  for (int i = 0; i < cells; ++i) {
    for (int j = 0; j < cells; ++j) {
      const std::array<double, 2> p{mean[0] - half + (i + 0.5) * step,
                                    mean[1] - half + (j + 0.5) * step};
      mass += std::exp(st::log_bvn_pdf(p, mean, cov)) * step * step;
    }
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(0.01));
  const std::array<std::array<double, 2>, 2> bad{{{1.0, 2.0}, {2.0, 1.0}}};
  CHECK_THROWS_AS((void)st::log_bvn_pdf(x, mean, bad), Error);
}

TEST_CASE("seeded draws are reproducible and land where they should") {
  RngHandle r1(3, 1), r2(3, 1);
  for (int i = 0; i < 100; ++i)
    CHECK(st::normal_draw(r1, 0.0, 1.0) == st::normal_draw(r2, 0.0, 1.0));

  RngHandle rng(13, 0);
  const int n = 100'000;
  // Log-normal median: count draws under exp(log_center).
  int below = 0;
  for (int i = 0; i < n; ++i)
    below += st::lognormal_draw(rng, 0.7, 0.9) < std::exp(0.7);
  CHECK(static_cast<double>(below) / n == doctest::Approx(0.5).epsilon(0.02));

  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = st::normal_draw(rng, 2.0, 3.0);
    sum += v;
    sumsq += v * v;
  }
  CHECK(sum / n == doctest::Approx(2.0).epsilon(0.02));
  CHECK(sumsq / n - (sum / n) * (sum / n) == doctest::Approx(3.0).epsilon(0.05));

  // Beta(10,10): mean 1/2, variance 1/84.
  sum = 0.0;
  sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = st::beta_draw(rng, 10.0, 10.0);
    sum += v;
    sumsq += v * v;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(sumsq / n - (sum / n) * (sum / n) ==
        doctest::Approx(1.0 / 84.0).epsilon(0.05));

  // Laplace(0, b): variance 2 b^2.
  sum = 0.0;
  sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = st::laplace_draw(rng, 0.0, 1.5);
    sum += v;
    sumsq += v * v;
  }
  CHECK(sum / n == doctest::Approx(0.0).scale(0.05));
  CHECK(sumsq / n == doctest::Approx(2.0 * 1.5 * 1.5).epsilon(0.05));

  // Binomial mean/variance.
  sum = 0.0;
  sumsq = 0.0;
  for (int i = 0; i < 20'000; ++i) {
    const auto v = static_cast<double>(st::binomial_draw(rng, 50, 0.3));
    sum += v;
    sumsq += v * v;
  }
  CHECK(sum / 20'000 == doctest::Approx(15.0).epsilon(0.02));
  CHECK(sumsq / 20'000 - (sum / 20'000) * (sum / 20'000) ==
        doctest::Approx(10.5).epsilon(0.1));
}
