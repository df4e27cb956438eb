#ifndef DPAUDIT_QUADRATURE_HPP_
#define DPAUDIT_QUADRATURE_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "dpaudit/model.hpp"
#include "dpaudit/parallel.hpp"

namespace dpaudit::quadrature {

// Deterministic grid quadrature of the single-challenge joint model at a
// fixed strength: the latent (alpha, beta) is integrated over a midpoint grid
// and eps over a uniform grid. Serves as the sampler's independent check.
struct EpsPosteriorCdf {
  std::vector<double> eps;  // grid points
  std::vector<double> cdf;  // P(eps <= grid point | counts)
};

EpsPosteriorCdf posterior_eps_cdf(const model::ChallengeObservation& obs,
                                  const model::HyperParams& hp, double s_fixed,
                                  double eps_hi, double eps_step,
                                  std::size_t latent_cells,
                                  Exec exec = Exec::openmp);

// sup_m | empirical_cdf(samples)(eps_m) - cdf_m |.
double sup_cdf_distance(std::span<const double> samples,
                        const EpsPosteriorCdf& reference);

}  // namespace dpaudit::quadrature

#endif  // DPAUDIT_QUADRATURE_HPP_
