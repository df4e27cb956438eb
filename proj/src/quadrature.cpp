#include "dpaudit/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "dpaudit/region.hpp"
#include "dpaudit/stats.hpp"

namespace dpaudit::quadrature {

EpsPosteriorCdf posterior_eps_cdf(const model::ChallengeObservation& obs,
                                  const model::HyperParams& hp, double s_fixed,
                                  double eps_hi, double eps_step,
                                  std::size_t latent_cells, Exec exec) {
  hp.validate();
  const region::Strength st(s_fixed);
  const auto m_count = static_cast<std::size_t>(eps_hi / eps_step) + 1;
  const std::size_t cells = latent_cells;

  // Binomial factors only depend on one latent coordinate each.
  std::vector<double> pmf_a(cells), pmf_b(cells), mid(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    mid[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(cells);
    pmf_a[i] = std::exp(stats::log_binomial_pmf(obs.x, obs.n0, mid[i]));
    pmf_b[i] = std::exp(stats::log_binomial_pmf(obs.y, obs.n1, mid[i]));
  }
  const double cell_area =
      1.0 / (static_cast<double>(cells) * static_cast<double>(cells));

  EpsPosteriorCdf out;
  out.eps.resize(m_count);
  std::vector<double> density(m_count, 0.0);
  const bool par = exec == Exec::openmp;
  const auto count = static_cast<std::int64_t>(m_count);
#pragma omp parallel for schedule(dynamic, 8) if (par)
  for (std::int64_t m = 0; m < count; ++m) {
    const double eps = static_cast<double>(m) * eps_step;
    out.eps[m] = eps;
    const region::PrivacyParams pp(eps, hp.delta);
    double area;
    try {
      area = region::shell_area(pp, st);
    } catch (const Error&) {
      density[m] = 0.0;  // degenerate shell carries no posterior mass
      continue;
    }
    const region::ShellView shell(pp, st);
    double integral = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
      if (pmf_a[i] == 0.0) continue;
      double row = 0.0;
      for (std::size_t j = 0; j < cells; ++j)
        if (shell.contains(mid[i], mid[j])) row += pmf_b[j];
      integral += pmf_a[i] * row;
    }
    integral *= cell_area / area;
    const double log_prior = model::log_prior_eps(eps, hp);
    density[m] = std::isfinite(log_prior) ? std::exp(log_prior) * integral : 0.0;
  }

  double total = 0.0;
  for (double d : density) total += d;
  if (!(total > 0.0))
    fail(Errc::numeric, "posterior_eps_cdf: zero posterior mass on the grid");
  // Each grid point carries the mass of its half-open cell; the cdf at the
  // point itself sits half a cell in.
  out.cdf.resize(m_count);
  double cum = 0.0;
  for (std::size_t m = 0; m < m_count; ++m) {
    cum += density[m];
    out.cdf[m] = (cum - 0.5 * density[m]) / total;
  }
  return out;
}

double sup_cdf_distance(std::span<const double> samples,
                        const EpsPosteriorCdf& reference) {
  if (samples.empty()) fail(Errc::validation, "sup_cdf_distance: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double sup = 0.0;
  for (std::size_t m = 0; m < reference.eps.size(); ++m) {
    const auto it =
        std::upper_bound(sorted.begin(), sorted.end(), reference.eps[m]);
    const double emp =
        static_cast<double>(std::distance(sorted.begin(), it)) / n;
    sup = std::max(sup, std::abs(emp - reference.cdf[m]));
  }
  return sup;
}

}  // namespace dpaudit::quadrature
