#include "dpaudit/attack.hpp"

#include <cmath>

#include "dpaudit/errors.hpp"
#include "dpaudit/stats.hpp"

namespace dpaudit::attack {

namespace {

// Leave-one-out normal fit: drop scores[skip] when skip < scores.size().
NormalFit fit_normal_loo(std::span<const double> scores, std::size_t skip) {
  const std::size_t m = scores.size() - (skip < scores.size() ? 1 : 0);
  if (m < 2) fail(Errc::insufficient_data, "fit_normal: fewer than 2 scores");
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (i != skip) sum += scores[i];
  const double mu = sum / static_cast<double>(m);
  double ss = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (i != skip) ss += (scores[i] - mu) * (scores[i] - mu);
  const double var = ss / static_cast<double>(m - 1);
  return NormalFit{mu, std::max(var, kVarFloor)};
}

}  // namespace

NormalFit fit_normal(std::span<const double> scores) {
  return fit_normal_loo(scores, scores.size());
}

int decide(const DecisionInputs& d) {
  if (!(d.alpha_star > 0.0 && d.alpha_star < 1.0))
    fail(Errc::validation, "decide: alpha_star outside (0,1)");
  const double v0 = d.fit0.var;
  const double v1 = d.fit1.var;
  const double mu0 = d.fit0.mu;
  const double mu1 = d.fit1.mu;
  if (std::abs(v0 - v1) <= 1e-9 * std::max(v0, v1)) {
    // Equal variances: the likelihood ratio is monotone in the score, so the
    // test reduces to a one-sided z-test away from the null mean.
    const double sigma = std::sqrt(v0);
    const double sign = mu1 >= mu0 ? 1.0 : -1.0;
    return sign * (d.score - mu0) / sigma >
                   stats::std_normal_inv_cdf(1.0 - d.alpha_star)
               ? 1
               : 0;
  }
  const double r = (mu0 / v0 - mu1 / v1) / (1.0 / v1 - 1.0 / v0);
  const double sigma0 = std::sqrt(v0);
  const double d_nc = mu0 / sigma0 + r / sigma0;
  const double nc = d_nc * d_nc;
  const double shifted_sq = (d.score + r) * (d.score + r);
  if (v0 > v1) {
    const double c = v0 * stats::noncentral_chisq1_inv_cdf(d.alpha_star, nc);
    return shifted_sq <= c ? 1 : 0;
  }
  const double c = v0 * stats::noncentral_chisq1_inv_cdf(1.0 - d.alpha_star, nc);
  return shifted_sq >= c ? 1 : 0;
}

double achieved_type1(const NormalFit& fit0, const NormalFit& fit1,
                      double alpha_star, std::uint64_t trials, RngHandle& rng) {
  if (trials < 1) fail(Errc::validation, "achieved_type1: trials < 1");
  std::uint64_t positives = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const double score = stats::normal_draw(rng, fit0.mu, fit0.var);
    positives += decide({score, fit0, fit1, alpha_star});
  }
  return static_cast<double>(positives) / static_cast<double>(trials);
}

MeasurementResult measure_mia(const testbed::Mechanism& mech,
                              const testbed::ChallengeBase& base,
                              std::uint32_t n0, std::uint32_t n1,
                              std::uint32_t m0, std::uint32_t m1,
                              double alpha_star, RngHandle& rng, Exec exec) {
  (void)exec;  // draws are inherently sequential on the caller's stream
  if (m0 < 2 || m1 < 2)
    fail(Errc::insufficient_data, "measure_mia: shadow sizes must be >= 2");
  const testbed::Dataset d0 = base.d;
  const testbed::Dataset d1 = base.with_z();
  MeasurementResult res;
  res.n0 = n0;
  res.n1 = n1;
  std::vector<double> shadow0(m0), shadow1(m1);
  auto challenge = [&](const testbed::Dataset& target) {
    const double score = mech.score(base.z, mech.draw(target, rng));
    for (std::uint32_t i = 0; i < m0; ++i)
      shadow0[i] = mech.score(base.z, mech.draw(d0, rng));
    for (std::uint32_t i = 0; i < m1; ++i)
      shadow1[i] = mech.score(base.z, mech.draw(d1, rng));
    return decide({score, fit_normal(shadow0), fit_normal(shadow1), alpha_star});
  };
  res.decisions0.reserve(n0);
  res.decisions1.reserve(n1);
  for (std::uint32_t j = 0; j < n0; ++j) {
    const int b = challenge(d0);
    res.decisions0.push_back(static_cast<std::uint8_t>(b));
    res.x += static_cast<std::uint32_t>(b);
  }
  for (std::uint32_t j = 0; j < n1; ++j) {
    const int b = challenge(d1);
    res.decisions1.push_back(static_cast<std::uint8_t>(b));
    res.y += static_cast<std::uint32_t>(1 - b);
  }
  return res;
}

MeasurementResult crossfed_decisions(std::span<const double> scores0,
                                     std::span<const double> scores1,
                                     double alpha_star, Exec exec) {
  if (scores0.size() != scores1.size() || scores0.size() < 3)
    fail(Errc::insufficient_data,
         "crossfed_decisions: needs n >= 3 matched scores per hypothesis");
  if (!(alpha_star > 0.0 && alpha_star < 1.0))
    fail(Errc::validation, "crossfed_decisions: alpha_star outside (0,1)");
  const std::size_t n = scores0.size();
  const NormalFit full0 = fit_normal(scores0);
  const NormalFit full1 = fit_normal(scores1);
  MeasurementResult res;
  res.n0 = static_cast<std::uint32_t>(n);
  res.n1 = static_cast<std::uint32_t>(n);
  res.decisions0.assign(n, 0);
  res.decisions1.assign(n, 0);
  const auto count = static_cast<std::int64_t>(n);
  const bool par = exec == Exec::openmp && n >= 16;
#pragma omp parallel for schedule(static) if (par)
  for (std::int64_t j = 0; j < count; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    // Target j under H_i: same-hypothesis scores minus j, all opposite ones.
    res.decisions0[ju] = static_cast<std::uint8_t>(
        decide({scores0[ju], fit_normal_loo(scores0, ju), full1, alpha_star}));
    res.decisions1[ju] = static_cast<std::uint8_t>(
        decide({scores1[ju], full0, fit_normal_loo(scores1, ju), alpha_star}));
  }
  for (std::size_t j = 0; j < n; ++j) {
    res.x += res.decisions0[j];
    res.y += static_cast<std::uint32_t>(1 - res.decisions1[j]);
  }
  return res;
}

MeasurementResult measure_mia_fast(const testbed::Mechanism& mech,
                                   const testbed::ChallengeBase& base,
                                   std::uint32_t n, double alpha_star,
                                   RngHandle& rng, Exec exec) {
  if (n < 3) fail(Errc::insufficient_data, "measure_mia_fast: n < 3");
  const testbed::Dataset d0 = base.d;
  const testbed::Dataset d1 = base.with_z();
  std::vector<double> scores0(n), scores1(n);
  for (std::uint32_t j = 0; j < n; ++j)
    scores0[j] = mech.score(base.z, mech.draw(d0, rng));
  for (std::uint32_t j = 0; j < n; ++j)
    scores1[j] = mech.score(base.z, mech.draw(d1, rng));
  return crossfed_decisions(scores0, scores1, alpha_star, exec);
}

std::vector<std::pair<double, MeasurementResult>> roc_sweep(
    const testbed::Mechanism& mech, const testbed::ChallengeBase& base,
    std::uint32_t n, std::span<const double> alpha_grid, RngHandle& rng,
    Exec exec) {
  if (n < 3) fail(Errc::insufficient_data, "roc_sweep: n < 3");
  const testbed::Dataset d0 = base.d;
  const testbed::Dataset d1 = base.with_z();
  std::vector<double> scores0(n), scores1(n);
  for (std::uint32_t j = 0; j < n; ++j)
    scores0[j] = mech.score(base.z, mech.draw(d0, rng));
  for (std::uint32_t j = 0; j < n; ++j)
    scores1[j] = mech.score(base.z, mech.draw(d1, rng));
  std::vector<std::pair<double, MeasurementResult>> out;
  out.reserve(alpha_grid.size());
  for (double a : alpha_grid)
    out.emplace_back(a, crossfed_decisions(scores0, scores1, a, exec));
  return out;
}

}  // namespace dpaudit::attack
