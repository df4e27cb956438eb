#include "dpaudit/model.hpp"

#include <cmath>

#include "dpaudit/stats.hpp"

namespace dpaudit::model {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogTwoPi = 1.8378770664093454836;
constexpr double kVarianceFloor = 1e-8;  // floor on a(1-a), b(1-b)
}  // namespace

BinomialLikelihood::BinomialLikelihood(const ChallengeObservation& obs) {
  const double n0 = obs.n0, n1 = obs.n1;
  xd = obs.x;
  yd = obs.y;
  n0mx = n0 - xd;
  n1my = n1 - yd;
  log_c0 = std::lgamma(n0 + 1.0) - std::lgamma(xd + 1.0) - std::lgamma(n0mx + 1.0);
  log_c1 = std::lgamma(n1 + 1.0) - std::lgamma(yd + 1.0) - std::lgamma(n1my + 1.0);
}

BivariateLikelihood::BivariateLikelihood(const ChallengeObservation& obs,
                                         const CorrelationParams& c) {
  if (obs.n0 != obs.n1 || obs.n0 != c.n)
    fail(Errc::mode_mismatch,
         "bivariate likelihood needs matched challenge counts n0 = n1 = N");
  x = obs.x;
  y = obs.y;
  n = obs.n0;
  count_var = n + n * (n - 1.0) * c.tau;
  cross = n * n * c.rho;
}

double BivariateLikelihood::operator()(double alpha, double beta) const {
  const double a = std::max(alpha * (1.0 - alpha), kVarianceFloor);
  const double b = std::max(beta * (1.0 - beta), kVarianceFloor);
  const double vx = a * count_var;
  const double vy = b * count_var;
  const double cov = cross * std::sqrt(a * b);
  const double det = vx * vy - cov * cov;
  if (!(vx > 0.0) || !(vy > 0.0) || !(det > 0.0)) return -kInf;
  const double dx = x - n * alpha;
  const double dy = y - n * beta;
  const double quad = (vy * dx * dx - 2.0 * cov * dx * dy + vx * dy * dy) / det;
  return -kLogTwoPi - 0.5 * std::log(det) - 0.5 * quad;
}

double log_g_independent(const ChallengeObservation& obs,
                         const region::ErrorPoint& p) {
  return stats::log_binomial_pmf(obs.x, obs.n0, p.alpha) +
         stats::log_binomial_pmf(obs.y, obs.n1, p.beta);
}

double log_g_bivariate(const ChallengeObservation& obs,
                       const region::ErrorPoint& p,
                       const CorrelationParams& c) {
  return BivariateLikelihood(obs, c)(p.alpha, p.beta);
}

double log_prior_eps(double eps, const HyperParams& hp) {
  return stats::log_truncnormal_pdf(eps, 0.0, kInf, 0.0, hp.sigma_eps_sq);
}

double log_prior_s(double s, const HyperParams& hp) {
  return stats::beta_log_pdf(s, hp.beta_a, hp.beta_b);
}

double log_prior_taurho(double tau, double rho, std::uint32_t n,
                        const HyperParams& hp) {
  if (n < 2) fail(Errc::validation, "log_prior_taurho: n < 2");
  if (!CorrelationParams::in_support(tau, rho, n)) return -kInf;
  const double nm1 = static_cast<double>(n - 1);
  const double log_tau =
      stats::log_truncnormal_pdf(tau, -1.0 / nm1, 1.0, 0.0, hp.sigma_tau_sq);
  // rho | tau ~ Unif on +-(1 + (n-1) tau)/n.
  const double log_rho =
      std::log(static_cast<double>(n) / (2.0 * (1.0 + nm1 * tau)));
  return log_tau + log_rho;
}

double log_weight(const ChallengeObservation& obs, const region::ErrorPoint& p,
                  double eps, double s, const HyperParams& hp,
                  LikelihoodMode mode,
                  const std::optional<CorrelationParams>& c) {
  const double log_density =
      region::shell_log_density(p, region::PrivacyParams(eps, hp.delta),
                                region::Strength(s));
  if (log_density == -kInf) return -kInf;
  double log_g;
  if (mode == LikelihoodMode::independent) {
    log_g = log_g_independent(obs, p);
  } else {
    if (!c) fail(Errc::validation, "log_weight: bivariate mode needs (tau, rho)");
    log_g = log_g_bivariate(obs, p, *c);
  }
  return log_density + log_g;
}

double log_joint(double eps, double s, const LatentErrors& latents,
                 std::span<const ChallengeObservation> observations,
                 const HyperParams& hp, LikelihoodMode mode,
                 const std::optional<CorrelationParams>& c) {
  hp.validate();
  if (latents.size() != observations.size())
    fail(Errc::validation, "log_joint: latents/observations length mismatch");
  double total = log_prior_eps(eps, hp) + log_prior_s(s, hp);
  if (mode == LikelihoodMode::bivariate) {
    if (!c) fail(Errc::validation, "log_joint: bivariate mode needs (tau, rho)");
    total += log_prior_taurho(c->tau, c->rho, c->n, hp);
  }
  if (total == -kInf) return -kInf;
  for (std::size_t i = 0; i < latents.size(); ++i) {
    total += log_weight(observations[i], latents[i], eps, s, hp, mode, c);
    if (total == -kInf) return -kInf;
  }
  return total;
}

}  // namespace dpaudit::model
