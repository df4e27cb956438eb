#include "dpaudit/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "dpaudit/stats.hpp"

namespace dpaudit::mcmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logsumexp(const double* v, std::size_t n) {
  double mx = -kInf;
  for (std::size_t i = 0; i < n; ++i) mx = std::max(mx, v[i]);
  if (mx == -kInf) return -kInf;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::exp(v[i] - mx);
  return mx + std::log(s);
}

}  // namespace

void SamplerConfig::validate() const {
  if (iterations < 1) fail(Errc::validation, "SamplerConfig: iterations < 1");
  if (burn_in >= iterations)
    fail(Errc::validation, "SamplerConfig: burn_in >= iterations");
  if (aux_count < 2) fail(Errc::validation, "SamplerConfig: aux_count < 2");
  if (!(prop_var_eps >= 0.0) || !(prop_var_s >= 0.0) ||
      !(prop_var_tau >= 0.0) || !(prop_var_rho >= 0.0))
    fail(Errc::validation, "SamplerConfig: negative proposal variance");
  if (!(init_eps > 0.0)) fail(Errc::validation, "SamplerConfig: init eps <= 0");
  if (!(init_s > 0.0 && init_s < 1.0))
    fail(Errc::validation, "SamplerConfig: init s outside (0,1)");
}

Chain::Chain(std::span<const model::ChallengeObservation> observations,
             const model::HyperParams& hp, const SamplerConfig& cfg)
    : obs_(observations.begin(), observations.end()),
      hp_(hp),
      cfg_(cfg),
      rng_(cfg.seed, cfg.stream) {
  hp_.validate();
  cfg_.validate();
  if (cfg_.mode == model::LikelihoodMode::bivariate) {
    if (obs_.empty())
      fail(Errc::validation, "bivariate mode needs at least one observation");
    const std::uint32_t n_common = obs_.front().n0;
    for (const auto& o : obs_)
      if (o.n0 != o.n1 || o.n0 != n_common)
        fail(Errc::mode_mismatch,
             "bivariate mode needs a uniform challenge count n0 = n1 = N");
    if (n_common < 2)
      fail(Errc::validation, "bivariate mode needs N >= 2");
    if (!model::CorrelationParams::in_support(cfg_.init_tau, cfg_.init_rho,
                                              n_common))
      fail(Errc::validation, "initial (tau, rho) outside the constraint set");
  }
  if (!std::isfinite(model::log_prior_eps(cfg_.init_eps, hp_)) ||
      !std::isfinite(model::log_prior_s(cfg_.init_s, hp_)))
    fail(Errc::validation, "initial (eps, s) has zero prior density");

  state_.eps = cfg_.init_eps;
  state_.s = cfg_.init_s;
  state_.tau = cfg_.init_tau;
  state_.rho = cfg_.init_rho;

  const region::PrivacyParams pp(state_.eps, hp_.delta);
  const region::Strength st(state_.s);
  log_area_cur_ = std::log(region::shell_area(pp, st));
  state_.latents.reserve(obs_.size());
  for (std::size_t j = 0; j < obs_.size(); ++j)
    state_.latents.push_back(region::sample_uniform_shell(pp, st, rng_));

  binom_.reserve(obs_.size());
  for (const auto& o : obs_) binom_.emplace_back(o);

  const std::size_t total = obs_.size() * cfg_.aux_count;
  aux_a_.resize(total);
  aux_b_.resize(total);
  logw_cur_.resize(total);
  logw_prop_.resize(total);

  sd_eps_ = std::sqrt(cfg_.prop_var_eps);
  sd_s_ = std::sqrt(cfg_.prop_var_s);
  sd_tau_ = std::sqrt(cfg_.prop_var_tau);
  sd_rho_ = std::sqrt(cfg_.prop_var_rho);
}

SampleRecord Chain::step() { return step(nullptr); }

SampleRecord Chain::step(StepDebug* debug) {
  const std::size_t n = obs_.size();
  const std::size_t K = cfg_.aux_count;
  const bool bivariate = cfg_.mode == model::LikelihoodMode::bivariate;

  // Proposals: log-normal walk on eps, normal walks on the rest. Every draw
  // comes from the chain stream in a fixed order; only the weight evaluation
  // below fans out to threads.
  const double eps_prop =
      state_.eps * std::exp(sd_eps_ * stats::std_normal_inv_cdf(rng_.uniform()));
  const double s_prop =
      state_.s + sd_s_ * stats::std_normal_inv_cdf(rng_.uniform());
  double tau_prop = state_.tau;
  double rho_prop = state_.rho;
  if (bivariate) {
    tau_prop += sd_tau_ * stats::std_normal_inv_cdf(rng_.uniform());
    rho_prop += sd_rho_ * stats::std_normal_inv_cdf(rng_.uniform());
  }

  // Prior log-ratio, including the eps'/eps factor from proposing on the log
  // scale. The current side is finite by the chain invariant, so the ratio is
  // finite or -inf, never NaN.
  double log_prior_ratio =
      model::log_prior_eps(eps_prop, hp_) - model::log_prior_eps(state_.eps, hp_) +
      model::log_prior_s(s_prop, hp_) - model::log_prior_s(state_.s, hp_) +
      std::log(eps_prop) - std::log(state_.eps);
  if (bivariate) {
    const std::uint32_t n_common = obs_.front().n0;
    log_prior_ratio +=
        model::log_prior_taurho(tau_prop, rho_prop, n_common, hp_) -
        model::log_prior_taurho(state_.tau, state_.rho, n_common, hp_);
  }
  bool valid = log_prior_ratio > -kInf;

  double log_area_prop = 0.0;
  if (valid) {
    try {
      log_area_prop = std::log(region::shell_area(
          region::PrivacyParams(eps_prop, hp_.delta), region::Strength(s_prop)));
    } catch (const Error&) {
      valid = false;  // degenerate proposed shell: auto-reject
    }
  }

  // Auxiliary latent points: slot 0 holds the current latent, the rest are
  // fresh uniforms. Both weight arrays are evaluated at these same points.
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t base = j * K;
    aux_a_[base] = state_.latents[j].alpha;
    aux_b_[base] = state_.latents[j].beta;
    for (std::size_t k = 1; k < K; ++k) {
      aux_a_[base + k] = rng_.uniform();
      aux_b_[base + k] = rng_.uniform();
    }
  }

  const region::ShellView shell_cur(region::PrivacyParams(state_.eps, hp_.delta),
                                    region::Strength(state_.s));
  const region::ShellView shell_prop =
      valid ? region::ShellView(region::PrivacyParams(eps_prop, hp_.delta),
                                region::Strength(s_prop))
            : shell_cur;

  std::vector<model::BivariateLikelihood> bvn_cur, bvn_prop;
  if (bivariate) {
    const std::uint32_t n_common = obs_.front().n0;
    const model::CorrelationParams cur(state_.tau, state_.rho, n_common);
    bvn_cur.reserve(n);
    for (const auto& o : obs_) bvn_cur.emplace_back(o, cur);
    if (valid) {
      const model::CorrelationParams prop(tau_prop, rho_prop, n_common);
      bvn_prop.reserve(n);
      for (const auto& o : obs_) bvn_prop.emplace_back(o, prop);
    }
  }

  const auto total = static_cast<std::int64_t>(n * K);
  const double neg_area_cur = -log_area_cur_;
  const double neg_area_prop = -log_area_prop;
  const bool par = cfg_.exec == Exec::openmp && total >= 64;
#pragma omp parallel for schedule(static) if (par)
  for (std::int64_t idx = 0; idx < total; ++idx) {
    const std::size_t j = static_cast<std::size_t>(idx) / K;
    const double a = aux_a_[idx];
    const double b = aux_b_[idx];
    const bool in_cur = shell_cur.contains(a, b);
    const bool in_prop = valid && shell_prop.contains(a, b);
    if (!bivariate) {
      const double log_g = (in_cur || in_prop) ? binom_[j](a, b) : 0.0;
      logw_cur_[idx] = in_cur ? neg_area_cur + log_g : -kInf;
      logw_prop_[idx] = in_prop ? neg_area_prop + log_g : -kInf;
    } else {
      logw_cur_[idx] = in_cur ? neg_area_cur + bvn_cur[j](a, b) : -kInf;
      logw_prop_[idx] = in_prop ? neg_area_prop + bvn_prop[j](a, b) : -kInf;
    }
  }

  double log_weight_ratio = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double lse_cur = logsumexp(&logw_cur_[j * K], K);
    if (lse_cur == -kInf)
      fail(Errc::numeric,
           "all auxiliary weights vanished under the current parameters "
           "(corrupted chain state)");
    if (valid) {
      const double lse_prop = logsumexp(&logw_prop_[j * K], K);
      log_weight_ratio += lse_prop - lse_cur;
    }
  }

  const double log_accept =
      valid ? log_prior_ratio + log_weight_ratio : -kInf;
  const double u_accept = rng_.uniform();
  const bool accepted = std::log(u_accept) <= log_accept;

  if (accepted) {
    state_.eps = eps_prop;
    state_.s = s_prop;
    state_.tau = tau_prop;
    state_.rho = rho_prop;
    log_area_cur_ = log_area_prop;
  }

  // Resample each latent from its auxiliary pool, weights from the kept side.
  const std::vector<double>& kept = accepted ? logw_prop_ : logw_cur_;
  std::vector<std::uint32_t> chosen(debug ? n : 0);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t base = j * K;
    double mx = -kInf;
    for (std::size_t k = 0; k < K; ++k) mx = std::max(mx, kept[base + k]);
    double total_w = 0.0;
    for (std::size_t k = 0; k < K; ++k) total_w += std::exp(kept[base + k] - mx);
    const double r = rng_.uniform() * total_w;
    double cum = 0.0;
    std::size_t pick = K - 1;
    for (std::size_t k = 0; k < K; ++k) {
      cum += std::exp(kept[base + k] - mx);
      if (cum >= r) {
        pick = k;
        break;
      }
    }
    state_.latents[j] = region::ErrorPoint(aux_a_[base + pick], aux_b_[base + pick]);
    if (debug) chosen[j] = static_cast<std::uint32_t>(pick);
  }

  ++state_.iteration;
  SampleRecord rec;
  rec.iteration = state_.iteration;
  rec.eps = state_.eps;
  rec.s = state_.s;
  if (bivariate) {
    rec.tau = state_.tau;
    rec.rho = state_.rho;
  }
  rec.accepted = accepted;

  if (debug) {
    debug->eps_prop = eps_prop;
    debug->s_prop = s_prop;
    debug->tau_prop = tau_prop;
    debug->rho_prop = rho_prop;
    debug->proposal_valid = valid;
    debug->aux.resize(n * K);
    for (std::size_t i = 0; i < n * K; ++i)
      debug->aux[i] = {aux_a_[i], aux_b_[i]};
    debug->logw_cur = logw_cur_;
    debug->logw_prop = logw_prop_;
    debug->log_prior_ratio = log_prior_ratio;
    debug->log_accept = log_accept;
    debug->accepted = accepted;
    debug->chosen = std::move(chosen);
  }
  return rec;
}

std::vector<SampleRecord> run(
    std::span<const model::ChallengeObservation> observations,
    const model::HyperParams& hp, const SamplerConfig& cfg) {
  Chain chain(observations, hp, cfg);
  std::vector<SampleRecord> records;
  records.reserve(cfg.iterations - cfg.burn_in);
  for (std::uint64_t i = 0; i < cfg.iterations; ++i) {
    SampleRecord rec = chain.step();
    if (rec.iteration > cfg.burn_in) records.push_back(rec);
  }
  return records;
}

std::vector<std::vector<SampleRecord>> run_chains(
    std::span<const model::ChallengeObservation> observations,
    const model::HyperParams& hp, const SamplerConfig& cfg,
    std::uint32_t n_chains) {
  if (n_chains < 1) fail(Errc::validation, "run_chains: n_chains < 1");
  std::vector<std::vector<SampleRecord>> out(n_chains);
  if (n_chains == 1) {
    out[0] = run(observations, hp, cfg);
    return out;
  }
  // One stream per chain; chains fan out, the kernel inside each stays serial.
  std::exception_ptr err;
  const auto count = static_cast<std::int64_t>(n_chains);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t c = 0; c < count; ++c) {
    try {
      SamplerConfig cc = cfg;
      cc.stream = cfg.stream + static_cast<std::uint64_t>(c);
      cc.exec = Exec::serial;
      out[c] = run(observations, hp, cc);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace dpaudit::mcmc
