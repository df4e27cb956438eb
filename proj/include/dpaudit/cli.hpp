#ifndef DPAUDIT_CLI_HPP_
#define DPAUDIT_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace dpaudit::cli {

// Relative output paths resolve under $DPAUDIT_OUT_ROOT when it is set; the
// environment variable is the only setting not carried by flags or config.
std::filesystem::path resolve_out(const std::filesystem::path& p);

struct MeasureArgs {
  std::string mechanism;  // registry name: gaussian-sum | laplace-sum
  double sensitivity = 1.0;
  double noise = 1.0;     // gaussian-sum: noise standard deviation
  double eps_true = 1.0;  // laplace-sum: target privacy loss
  std::uint32_t dataset_size = 20;
  std::uint32_t bases = 20;       // number of challenge bases
  std::uint32_t challenges = 100; // challenges per hypothesis per base
  double alpha_star = 0.1;
  std::optional<std::string> alpha_grid;  // "start:stop:step" sweep
  bool fast = true;                       // cross-fed harness vs direct
  std::uint32_t m0 = 100, m1 = 100;       // shadow sizes (direct harness)
  std::uint64_t seed = 0;
  std::filesystem::path out;
  std::optional<std::filesystem::path> sweep_out;
  std::optional<std::filesystem::path> decisions_out;  // per-trial decision log
};

void run_measure(const MeasureArgs& args);

struct EstimateArgs {
  std::filesystem::path counts;
  std::filesystem::path config;
  std::filesystem::path out_dir;
};

void run_estimate(const EstimateArgs& args);

struct ReplicateArgs {
  std::string experiment;  // fig2-ci-vs-s | scenario-weak | scenario-strong |
                           // oracle-check
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
};

void run_replicate(const ReplicateArgs& args);

struct DiagnoseArgs {
  std::filesystem::path trace;
  std::filesystem::path out_dir;
};

void run_diagnose(const DiagnoseArgs& args);

}  // namespace dpaudit::cli

#endif  // DPAUDIT_CLI_HPP_
