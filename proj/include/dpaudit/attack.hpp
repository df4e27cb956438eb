#ifndef DPAUDIT_ATTACK_HPP_
#define DPAUDIT_ATTACK_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "dpaudit/parallel.hpp"
#include "dpaudit/rng.hpp"
#include "dpaudit/testbed_types.hpp"

namespace dpaudit::attack {

// Normal fit of a score sample: mean and unbiased variance, the latter
// floored at 1e-12 so deterministic mechanisms stay usable.
struct NormalFit {
  double mu;
  double var;
};

constexpr double kVarFloor = 1e-12;

NormalFit fit_normal(std::span<const double> scores);

struct DecisionInputs {
  double score;       // observed score of the challenged output
  NormalFit fit0;     // fitted null (non-member) score distribution
  NormalFit fit1;     // fitted alternative (member) score distribution
  double alpha_star;  // target type-I error, strictly inside (0,1)
};

// Most powerful test between two fitted normals at a single observation,
// targeting type-I error alpha_star. The quadratic rule shifts the score by
//   R = (mu0/var0 - mu1/var1) / (1/var1 - 1/var0)
// and compares (score + R)^2 against a noncentral-chi-square quantile with
// noncentrality (mu0/sigma0 + R/sigma0)^2; variances within 1e-9 relative of
// each other route to the linear equal-variance rule. Returns 1 to claim
// membership.
int decide(const DecisionInputs& d);

// Monte-Carlo type-I error of decide() when scores truly follow fit0.
double achieved_type1(const NormalFit& fit0, const NormalFit& fit1,
                      double alpha_star, std::uint64_t trials, RngHandle& rng);

struct MeasurementResult {
  std::uint32_t x = 0;   // false positives
  std::uint32_t y = 0;   // false negatives
  std::uint32_t n0 = 0;  // challenges under H0
  std::uint32_t n1 = 0;  // challenges under H1
  std::vector<std::uint8_t> decisions0;  // per-trial decisions under H0
  std::vector<std::uint8_t> decisions1;  // per-trial decisions under H1
};

// Direct measurement: every challenge draws a fresh output and fresh shadow
// score sets of sizes m0, m1, so decisions are i.i.d. given the true error
// rates. Costs (n0 + n1)(m0 + m1) + n0 + n1 mechanism draws.
MeasurementResult measure_mia(const testbed::Mechanism& mech,
                              const testbed::ChallengeBase& base,
                              std::uint32_t n0, std::uint32_t n1,
                              std::uint32_t m0, std::uint32_t m1,
                              double alpha_star, RngHandle& rng,
                              Exec exec = Exec::openmp);

// Cross-fed measurement: n outputs per hypothesis drawn once (2n draws
// total); each target is attacked with the remaining same-hypothesis scores
// (leave-one-out) plus all opposite-hypothesis scores as shadows. Decisions
// share the shadow pool and are therefore correlated.
MeasurementResult measure_mia_fast(const testbed::Mechanism& mech,
                                   const testbed::ChallengeBase& base,
                                   std::uint32_t n, double alpha_star,
                                   RngHandle& rng, Exec exec = Exec::openmp);

// Pure decision stage of the cross-fed measurement, reused across a threshold
// sweep: scores are drawn once, only alpha_star changes.
MeasurementResult crossfed_decisions(std::span<const double> scores0,
                                     std::span<const double> scores1,
                                     double alpha_star,
                                     Exec exec = Exec::openmp);

// One cross-fed measurement per target type-I level from a single set of 2n
// draws.
std::vector<std::pair<double, MeasurementResult>> roc_sweep(
    const testbed::Mechanism& mech, const testbed::ChallengeBase& base,
    std::uint32_t n, std::span<const double> alpha_grid, RngHandle& rng,
    Exec exec = Exec::openmp);

}  // namespace dpaudit::attack

#endif  // DPAUDIT_ATTACK_HPP_
