#ifndef DPAUDIT_STATS_HPP_
#define DPAUDIT_STATS_HPP_

#include <array>
#include <cstdint>

#include "dpaudit/rng.hpp"

namespace dpaudit::stats {

// ---- standard normal ----

double std_normal_pdf(double x);
double std_normal_cdf(double x);

// Inverse of std_normal_cdf on (0,1); |cdf(inv_cdf(u)) - u| <= 1e-10.
double std_normal_inv_cdf(double u);

// ---- noncentral chi-square, 1 degree of freedom ----
//
// With Z standard normal and noncentrality nc = d^2,
//   P((Z + d)^2 <= c) = Phi(sqrt(c) - d) - Phi(-sqrt(c) - d),
// which is all the single-observation likelihood-ratio test needs.

double noncentral_chisq1_cdf(double c, double nc);

// Monotone bisection on the closed-form cdf; |cdf(result, nc) - u| <= 1e-10.
double noncentral_chisq1_inv_cdf(double u, double nc);

// ---- densities ----

// Exact log pmf via log-gamma. p = 0 or 1 follows the degenerate pmf
// (all mass at 0 or n) instead of erroring.
double log_binomial_pmf(std::uint64_t k, std::uint64_t n, double p);

// Normalized truncated-normal log density on [lo, hi] (hi may be +inf).
double log_truncnormal_pdf(double x, double lo, double hi, double mu,
                           double var);

double beta_log_pdf(double x, double a, double b);

// Bivariate normal log density; throws Errc::numeric if cov is not positive
// definite (callers in the model map that to log-weight -inf).
double log_bvn_pdf(const std::array<double, 2>& x,
                   const std::array<double, 2>& mean,
                   const std::array<std::array<double, 2>, 2>& cov);

// ---- seedable draws ----

double uniform_draw(RngHandle& rng);
double normal_draw(RngHandle& rng, double mu, double var);
// Median of the draw distribution is exp(log_center).
double lognormal_draw(RngHandle& rng, double log_center, double var);
double laplace_draw(RngHandle& rng, double location, double scale);
double gamma_draw(RngHandle& rng, double shape, double scale);
double beta_draw(RngHandle& rng, double a, double b);
std::uint64_t binomial_draw(RngHandle& rng, std::uint64_t n, double p);

}  // namespace dpaudit::stats

#endif  // DPAUDIT_STATS_HPP_
