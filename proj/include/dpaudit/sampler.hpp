#ifndef DPAUDIT_SAMPLER_HPP_
#define DPAUDIT_SAMPLER_HPP_

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "dpaudit/model.hpp"
#include "dpaudit/parallel.hpp"
#include "dpaudit/rng.hpp"

namespace dpaudit::mcmc {

// Configuration of one chain. A proposal variance of exactly zero freezes the
// corresponding parameter at its initial value (used for fixed-strength runs
// and as a test hook; the degenerate proposal is symmetric, so the kernel
// stays a valid Metropolis-Hastings move).
struct SamplerConfig {
  std::uint64_t iterations = 100'000;  // total iterations M
  std::uint64_t burn_in = 10'000;
  std::uint32_t aux_count = 1000;  // auxiliary points per challenge, K >= 2
  double prop_var_eps = 1e-2;      // random-walk variance for log eps
  double prop_var_s = 1e-4;
  double prop_var_tau = 1e-6;
  double prop_var_rho = 1e-6;
  model::LikelihoodMode mode = model::LikelihoodMode::independent;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  double init_eps = 1.0;
  double init_s = 0.5;
  double init_tau = 0.0;
  double init_rho = 0.0;
  Exec exec = Exec::openmp;

  void validate() const;
};

struct SampleRecord {
  std::uint64_t iteration;  // 1-based global iteration index
  double eps;
  double s;
  double tau = std::numeric_limits<double>::quiet_NaN();
  double rho = std::numeric_limits<double>::quiet_NaN();
  bool accepted;
};

struct ChainState {
  double eps;
  double s;
  double tau;
  double rho;
  model::LatentErrors latents;  // one (alpha, beta) per challenge
  std::uint64_t iteration = 0;
};

// Internals of a single iteration, exposed for verification: the auxiliary
// points and both weight arrays share the same points by construction, and the
// acceptance ratio can be recomputed from these pieces alone.
struct StepDebug {
  double eps_prop, s_prop, tau_prop, rho_prop;
  bool proposal_valid;
  std::vector<std::array<double, 2>> aux;  // [challenge * K + k]
  std::vector<double> logw_cur;            // same layout
  std::vector<double> logw_prop;
  double log_prior_ratio;  // includes the eps'/eps change-of-variable factor
  double log_accept;       // uncapped log acceptance ratio
  bool accepted;
  std::vector<std::uint32_t> chosen;  // resampled auxiliary index per challenge
};

// One chain of the averaged-acceptance-ratio sampler over
// (eps, s [, tau, rho], latent error points). Each iteration proposes
// parameters jointly, scores K shared auxiliary latent points per challenge
// under both parameter settings, accepts on the averaged ratio, then
// resamples every latent from its auxiliary pool.
class Chain {
 public:
  Chain(std::span<const model::ChallengeObservation> observations,
        const model::HyperParams& hp, const SamplerConfig& cfg);

  SampleRecord step();
  SampleRecord step(StepDebug* debug);
  const ChainState& state() const { return state_; }

 private:
  std::vector<model::ChallengeObservation> obs_;
  model::HyperParams hp_;
  SamplerConfig cfg_;
  RngHandle rng_;
  ChainState state_;

  // scratch, reused across iterations
  std::vector<double> aux_a_, aux_b_;
  std::vector<double> logw_cur_, logw_prop_;
  std::vector<model::BinomialLikelihood> binom_;

  double log_area_cur_;  // cached shell area at the current parameters
  double sd_eps_, sd_s_, sd_tau_, sd_rho_;
};

// Runs one chain and returns the post-burn-in records.
std::vector<SampleRecord> run(
    std::span<const model::ChallengeObservation> observations,
    const model::HyperParams& hp, const SamplerConfig& cfg);

// Independent chains on consecutive RNG streams (stream, stream+1, ...).
// Chains fan out across threads; traces are merged by chain index.
std::vector<std::vector<SampleRecord>> run_chains(
    std::span<const model::ChallengeObservation> observations,
    const model::HyperParams& hp, const SamplerConfig& cfg,
    std::uint32_t n_chains);

}  // namespace dpaudit::mcmc

#endif  // DPAUDIT_SAMPLER_HPP_
