#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dpaudit/cli.hpp"
#include "dpaudit/errors.hpp"

namespace {

int exit_code_for(dpaudit::Errc c) {
  using dpaudit::Errc;
  switch (c) {
    case Errc::validation:
    case Errc::parse:
    case Errc::insufficient_data:
      return 2;
    case Errc::io:
      return 3;
    case Errc::unknown_id:
      return 4;
    case Errc::mode_mismatch:
      return 5;
    case Errc::degenerate_region:
      return 6;
    case Errc::numeric:
      return 7;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian estimation of a DP mechanism's privacy loss from "
               "membership-inference error counts"};
  app.require_subcommand(1);

  dpaudit::cli::MeasureArgs measure;
  std::string alpha_grid, sweep_out, decisions_out;
  auto* m = app.add_subcommand(
      "measure", "Run a membership-inference harness and write error counts");
  m->add_option("--mechanism", measure.mechanism,
                "Mechanism id: gaussian-sum | laplace-sum")
      ->required();
  m->add_option("--sensitivity", measure.sensitivity, "Query sensitivity");
  m->add_option("--noise", measure.noise, "Noise std dev (gaussian-sum)");
  m->add_option("--eps-true", measure.eps_true, "True eps (laplace-sum)");
  m->add_option("--dataset-size", measure.dataset_size, "Records per dataset");
  m->add_option("--bases", measure.bases, "Number of challenge bases");
  m->add_option("--challenges", measure.challenges,
                "Challenges per hypothesis per base");
  m->add_option("--alpha-star", measure.alpha_star, "Target type-I error");
  m->add_option("--alpha-grid", alpha_grid,
                "Sweep grid start:stop:step (fast harness only)");
  auto* slow = m->add_flag("--slow", "Direct harness with fresh shadow sets");
  m->add_option("--m0", measure.m0, "H0 shadow scores per trial (slow)");
  m->add_option("--m1", measure.m1, "H1 shadow scores per trial (slow)");
  m->add_option("--seed", measure.seed, "RNG seed");
  m->add_option("--out", measure.out, "Counts file path")->required();
  m->add_option("--sweep-out", sweep_out, "Sweep file path (with --alpha-grid)");
  m->add_option("--decisions-out", decisions_out,
                "Per-trial decision log path");

  dpaudit::cli::EstimateArgs estimate;
  auto* e = app.add_subcommand(
      "estimate", "Sample the joint posterior of (eps, s[, tau, rho])");
  e->add_option("--counts", estimate.counts, "Counts file")->required();
  e->add_option("--config", estimate.config, "Run config file")->required();
  e->add_option("--out-dir", estimate.out_dir, "Output directory")->required();

  dpaudit::cli::ReplicateArgs replicate;
  auto* r = app.add_subcommand("replicate",
                               "Run a packaged synthetic experiment end-to-end");
  r->add_option("--experiment", replicate.experiment,
                "fig2-ci-vs-s | scenario-weak | scenario-strong | oracle-check")
      ->required();
  r->add_option("--seed", replicate.seed, "RNG seed");
  r->add_option("--out-dir", replicate.out_dir, "Output directory")->required();

  dpaudit::cli::DiagnoseArgs diagnose;
  auto* d = app.add_subcommand("diagnose", "Chain diagnostics from a trace");
  d->add_option("--trace", diagnose.trace, "Trace file")->required();
  d->add_option("--out-dir", diagnose.out_dir, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (m->parsed()) {
      measure.fast = slow->count() == 0;
      if (!alpha_grid.empty()) measure.alpha_grid = alpha_grid;
      if (!sweep_out.empty()) measure.sweep_out = sweep_out;
      if (!decisions_out.empty()) measure.decisions_out = decisions_out;
      dpaudit::cli::run_measure(measure);
    } else if (e->parsed()) {
      dpaudit::cli::run_estimate(estimate);
    } else if (r->parsed()) {
      dpaudit::cli::run_replicate(replicate);
    } else if (d->parsed()) {
      dpaudit::cli::run_diagnose(diagnose);
    }
  } catch (const dpaudit::Error& err) {
    std::cerr << "{\"error\":\"" << dpaudit::errc_name(err.code())
              << "\",\"message\":\"" << err.what() << "\"}\n";
    return exit_code_for(err.code());
  } catch (const std::exception& err) {
    std::cerr << "{\"error\":\"internal\",\"message\":\"" << err.what()
              << "\"}\n";
    return 1;
  }
  return 0;
}
