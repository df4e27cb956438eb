#ifndef DPAUDIT_MODEL_HPP_
#define DPAUDIT_MODEL_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpaudit/errors.hpp"
#include "dpaudit/region.hpp"

namespace dpaudit::model {

// One challenge base's data: counts of challenges under each hypothesis and
// the observed false-positive / false-negative counts.
struct ChallengeObservation {
  ChallengeObservation(std::string id_, std::uint32_t n0_, std::uint32_t n1_,
                       std::uint32_t x_, std::uint32_t y_)
      : id(std::move(id_)), n0(n0_), n1(n1_), x(x_), y(y_) {
    if (n0 < 1 || n1 < 1)
      fail(Errc::validation, "ChallengeObservation: challenge counts < 1");
    if (x > n0 || y > n1)
      fail(Errc::validation, "ChallengeObservation: error count exceeds trials");
  }
  std::string id;
  std::uint32_t n0, n1;  // challenges under H0, H1
  std::uint32_t x, y;    // false positives, false negatives
};

struct HyperParams {
  double sigma_eps_sq = 10.0;  // eps ~ half-normal(0, sigma_eps_sq)
  double beta_a = 1.0;         // s ~ Beta(a, b)
  double beta_b = 1.0;
  double sigma_tau_sq = 1e-4;  // tau prior variance (correlated-counts model)
  double delta = 0.0;          // fixed DP delta for the run

  void validate() const {
    if (!(sigma_eps_sq > 0.0) || !(beta_a > 0.0) || !(beta_b > 0.0) ||
        !(sigma_tau_sq > 0.0))
      fail(Errc::validation, "HyperParams: nonpositive hyperparameter");
    if (!(delta >= 0.0 && delta < 1.0))
      fail(Errc::validation, "HyperParams: delta outside [0,1)");
  }
};

// Decision correlations induced by cross-fed measurements: tau within a
// hypothesis, rho across hypotheses, n the common challenge count. The
// constructor enforces exactly the moment constraints
//   -1/(n-1) < tau <= 1   and   |rho| <= (1 + (n-1) tau) / n.
struct CorrelationParams {
  CorrelationParams(double tau_, double rho_, std::uint32_t n_)
      : tau(tau_), rho(rho_), n(n_) {
    if (n < 2) fail(Errc::validation, "CorrelationParams: n < 2");
    if (!in_support(tau, rho, n))
      fail(Errc::validation, "CorrelationParams: (tau, rho) outside support");
  }
  static bool in_support(double tau, double rho, std::uint32_t n) {
    const double nm1 = static_cast<double>(n - 1);
    if (!(tau > -1.0 / nm1 && tau <= 1.0)) return false;
    const double bound = (1.0 + nm1 * tau) / static_cast<double>(n);
    return std::abs(rho) <= bound;
  }
  double tau;
  double rho;
  std::uint32_t n;
};

using LatentErrors = std::vector<region::ErrorPoint>;

enum class LikelihoodMode { independent, bivariate };

// ---- observation likelihoods ----

// Product of the two binomial log pmfs (independent tests per challenge).
double log_g_independent(const ChallengeObservation& obs,
                         const region::ErrorPoint& p);

// Bivariate-normal count approximation for cross-fed measurements:
//   mean (N a, N b), Var = a(1-a) (N + N(N-1) tau) and likewise in b,
//   Cov  = N^2 rho sqrt(a(1-a) b(1-b)).
// Returns -inf when the implied covariance is not positive definite.
double log_g_bivariate(const ChallengeObservation& obs,
                       const region::ErrorPoint& p,
                       const CorrelationParams& c);

// ---- priors ----

double log_prior_eps(double eps, const HyperParams& hp);
double log_prior_s(double s, const HyperParams& hp);
// Joint prior: tau ~ truncated normal on (-1/(n-1), 1], rho | tau uniform on
// the moment-constraint interval; -inf outside the constraint set.
double log_prior_taurho(double tau, double rho, std::uint32_t n,
                        const HyperParams& hp);

// ---- per-challenge weight and the full joint ----

double log_weight(const ChallengeObservation& obs, const region::ErrorPoint& p,
                  double eps, double s, const HyperParams& hp,
                  LikelihoodMode mode,
                  const std::optional<CorrelationParams>& c = std::nullopt);

double log_joint(double eps, double s, const LatentErrors& latents,
                 std::span<const ChallengeObservation> observations,
                 const HyperParams& hp, LikelihoodMode mode,
                 const std::optional<CorrelationParams>& c = std::nullopt);

// ---- kernel-facing cached forms ----
//
// The sampler evaluates g at every auxiliary point; these structs hoist the
// per-observation constants out of that loop. They must agree exactly with
// log_g_independent / log_g_bivariate (unit tests pin this).

struct BinomialLikelihood {
  explicit BinomialLikelihood(const ChallengeObservation& obs);
  double operator()(double alpha, double beta) const {
    return part(alpha, xd, n0mx, log_c0) + part(beta, yd, n1my, log_c1);
  }
  // Same p = 0 / p = 1 semantics as stats::log_binomial_pmf.
  static double part(double p, double k, double nmk, double logc) {
    if (p <= 0.0) return k == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return nmk == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
    return logc + k * std::log(p) + nmk * std::log1p(-p);
  }
  double log_c0, log_c1;
  double xd, n0mx, yd, n1my;
};

struct BivariateLikelihood {
  BivariateLikelihood(const ChallengeObservation& obs,
                      const CorrelationParams& c);
  double operator()(double alpha, double beta) const;
  double x, y;
  double n;          // common challenge count
  double count_var;  // N + N(N-1) tau
  double cross;      // N^2 rho
};

}  // namespace dpaudit::model

#endif  // DPAUDIT_MODEL_HPP_
