#ifndef DPAUDIT_TESTBED_HPP_
#define DPAUDIT_TESTBED_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "dpaudit/model.hpp"
#include "dpaudit/region.hpp"
#include "dpaudit/testbed_types.hpp"

namespace dpaudit::testbed {

// Sum query with Laplace noise of scale sensitivity/eps_true: pure eps-DP
// ground truth. score(z, output) = output.
std::unique_ptr<Mechanism> laplace_sum_mechanism(double sensitivity,
                                                 double eps_true);

// Sum query with N(0, sigma^2) noise. The analytic trade-off of the optimal
// threshold test is beta(alpha) = Phi(Phi^-1(1-alpha) - sensitivity/sigma).
std::unique_ptr<Mechanism> gaussian_sum_mechanism(double sensitivity,
                                                  double sigma);

// Smallest eps such that the whole trade-off curve stays inside the
// trade-off region at the given delta; computed directly from the curve by
// maximizing the boundary violation and bisecting on eps.
double eps_from_tradeoff_curve(const std::function<double(double)>& beta_at_alpha,
                               double delta);

// Random challenge base: dataset of `size` uniform(0,1) records, challenge
// record z = sensitivity so the two neighboring sums differ by exactly the
// worst-case amount the analytic metadata assumes.
ChallengeBase make_challenge_base(std::size_t size, double sensitivity,
                                  RngHandle& rng);

// Synthetic error-count scenarios.

// Attacks spread over the whole region: alpha_i, beta_i ~ Beta(10,10) with
// independent binomial counts at N challenges per hypothesis.
std::vector<model::ChallengeObservation> generate_scenario_weak(
    std::uint32_t n, std::uint32_t N, RngHandle& rng);

// Fixed table of ten relatively accurate attacks at N = 1000.
std::vector<model::ChallengeObservation> scenario_strong();

// Single attack imitating alpha = beta = 0.4: X = Y = floor(0.4 N).
model::ChallengeObservation scenario_fig2(std::uint32_t N);

// Grouped generator: one shell-uniform center per group, member error rates
// from a truncated bivariate normal (diagonal covariance `spread` * I) around
// the center, then conditionally independent binomial counts.
struct GroupedScenario {
  std::vector<region::ErrorPoint> centers;
  std::vector<std::vector<model::ChallengeObservation>> groups;
};

GroupedScenario generate_grouped(std::uint32_t n_groups,
                                 std::span<const std::uint32_t> sizes,
                                 double eps, double delta, double s,
                                 double spread, std::uint32_t N,
                                 RngHandle& rng);

}  // namespace dpaudit::testbed

#endif  // DPAUDIT_TESTBED_HPP_
