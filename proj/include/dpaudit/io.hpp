#ifndef DPAUDIT_IO_HPP_
#define DPAUDIT_IO_HPP_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpaudit/model.hpp"
#include "dpaudit/sampler.hpp"

namespace dpaudit::io {

using Json = nlohmann::ordered_json;

// Error-count document (schema version "1"). shared_n marks counts produced
// by the cross-fed harness, where every record has n0 = n1 = N; such counts
// feed the bivariate likelihood.
struct CountsFile {
  std::vector<model::ChallengeObservation> records;
  std::optional<std::uint32_t> shared_n;
  Json provenance;  // free-form run metadata (mechanism, alpha_star, seed)
};

CountsFile read_counts(const std::filesystem::path& path);
void write_counts(const CountsFile& counts, const std::filesystem::path& path);

// Full estimation configuration. delta is required; everything else has the
// documented defaults. Unknown keys anywhere in the document are rejected.
struct RunConfig {
  model::LikelihoodMode mode = model::LikelihoodMode::independent;
  model::HyperParams hyper;
  mcmc::SamplerConfig sampler;
  std::uint32_t chains = 1;
};

RunConfig read_run_config(const std::filesystem::path& path);
RunConfig run_config_from_json(const Json& j);
Json run_config_to_json(const RunConfig& cfg);

// Delimited sample trace: header iteration,eps,s[,tau,rho],accepted.
void write_trace(std::span<const mcmc::SampleRecord> records,
                 model::LikelihoodMode mode,
                 const std::filesystem::path& path);

struct Trace {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> series;  // one vector per column
};

Trace read_trace(const std::filesystem::path& path);

// Posterior summary: per-chain and pooled quantiles, 90% credible interval,
// acceptance rate, autocorrelations at lags 1..100, effective sample sizes,
// and a 2-D (eps, s) histogram of the pooled samples.
Json summarize_chains(const std::vector<std::vector<mcmc::SampleRecord>>& chains,
                      model::LikelihoodMode mode);

void write_json(const Json& j, const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);

std::string format_double(double v);

}  // namespace dpaudit::io

#endif  // DPAUDIT_IO_HPP_
