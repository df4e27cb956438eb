#include "dpaudit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <vector>

#include "dpaudit/attack.hpp"
#include "dpaudit/diagnostics.hpp"
#include "dpaudit/io.hpp"
#include "dpaudit/quadrature.hpp"
#include "dpaudit/sampler.hpp"
#include "dpaudit/testbed.hpp"

namespace dpaudit::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

// Stream-id layout: chain c of an estimation run uses config stream + c;
// measurement base i uses stream i; replicate data generation uses a high
// stream so it never collides with chain streams.
constexpr std::uint64_t kDataStream = 1'000'000;

std::vector<double> parse_alpha_grid(const std::string& spec) {
  double start = 0.0, stop = 0.0, step = 0.0;
  const auto c1 = spec.find(':');
  const auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    fail(Errc::validation, "alpha-grid must be start:stop:step");
  try {
    start = std::stod(spec.substr(0, c1));
    stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    step = std::stod(spec.substr(c2 + 1));
  } catch (const std::exception&) {
    fail(Errc::validation, "alpha-grid must be numeric start:stop:step");
  }
  if (!(step > 0.0) || !(start > 0.0) || !(stop < 1.0) || start > stop)
    fail(Errc::validation, "alpha-grid must satisfy 0 < start <= stop < 1, step > 0");
  std::vector<double> grid;
  for (double a = start; a <= stop + 1e-12; a += step) grid.push_back(a);
  return grid;
}

std::unique_ptr<testbed::Mechanism> make_mechanism(const MeasureArgs& args,
                                                   Json* provenance) {
  std::unique_ptr<testbed::Mechanism> mech;
  if (args.mechanism == "gaussian-sum") {
    mech = testbed::gaussian_sum_mechanism(args.sensitivity, args.noise);
    (*provenance)["noise"] = args.noise;
  } else if (args.mechanism == "laplace-sum") {
    mech = testbed::laplace_sum_mechanism(args.sensitivity, args.eps_true);
    (*provenance)["eps_true"] = args.eps_true;
  } else {
    fail(Errc::unknown_id, "unknown mechanism '" + args.mechanism + "'");
  }
  (*provenance)["mechanism"] = args.mechanism;
  (*provenance)["sensitivity"] = args.sensitivity;
  (*provenance)["dataset_size"] = args.dataset_size;
  return mech;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(Errc::io, "cannot create directory " + dir.string());
}

Json decisions_to_json(const std::vector<std::uint8_t>& d) {
  Json arr = Json::array();
  for (auto b : d) arr.push_back(static_cast<int>(b));
  return arr;
}

// Shared estimation pipeline: run the configured chains, write traces,
// summary, and the resolved config into out_dir.
void estimate_into(const std::vector<model::ChallengeObservation>& records,
                   const io::RunConfig& cfg, const fs::path& out_dir) {
  ensure_dir(out_dir);
  const auto chains = mcmc::run_chains(records, cfg.hyper, cfg.sampler, cfg.chains);
  if (cfg.chains == 1) {
    io::write_trace(chains[0], cfg.mode, out_dir / "trace.csv");
  } else {
    for (std::uint32_t c = 0; c < cfg.chains; ++c)
      io::write_trace(chains[c], cfg.mode,
                      out_dir / ("trace_chain" + std::to_string(c) + ".csv"));
  }
  io::write_json(io::summarize_chains(chains, cfg.mode), out_dir / "summary.json");
  io::write_json(io::run_config_to_json(cfg), out_dir / "resolved_config.json");
}

Json hist1d_json(const std::vector<double>& xs, std::size_t bins) {
  const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
  const double lo = *mn, hi = *mx;
  const double span = hi > lo ? hi - lo : 1.0;
  std::vector<std::size_t> counts(bins, 0);
  for (double v : xs) {
    auto b = static_cast<std::size_t>((v - lo) / span * static_cast<double>(bins));
    ++counts[std::min(b, bins - 1)];
  }
  Json j;
  j["range"] = Json::array({lo, hi});
  j["counts"] = counts;
  return j;
}

void replicate_fig2(std::uint64_t seed, const fs::path& out_dir);
void replicate_scenario(const std::string& which, std::uint64_t seed,
                        const fs::path& out_dir);
void replicate_oracle_check(std::uint64_t seed, const fs::path& out_dir);

}  // namespace

fs::path resolve_out(const fs::path& p) {
  if (p.is_absolute()) return p;
  if (const char* root = std::getenv("DPAUDIT_OUT_ROOT")) return fs::path(root) / p;
  return p;
}

void run_measure(const MeasureArgs& args) {
  Json provenance;
  const auto mech = make_mechanism(args, &provenance);
  provenance["alpha_star"] = args.alpha_star;
  provenance["seed"] = args.seed;
  provenance["harness"] = args.fast ? "fast" : "slow";
  if (!(args.alpha_star > 0.0 && args.alpha_star < 1.0))
    fail(Errc::validation, "alpha-star outside (0,1)");
  if (args.bases < 1) fail(Errc::validation, "bases must be >= 1");
  if (args.alpha_grid && !args.fast)
    fail(Errc::validation, "alpha-grid sweeps need the fast harness");

  std::vector<double> grid;
  if (args.alpha_grid) grid = parse_alpha_grid(*args.alpha_grid);

  io::CountsFile counts;
  counts.provenance = provenance;
  if (args.fast) counts.shared_n = args.challenges;
  Json sweep_bases = Json::array();
  Json decision_bases = Json::array();

  for (std::uint32_t i = 0; i < args.bases; ++i) {
    RngHandle rng(args.seed, i);
    const auto base =
        testbed::make_challenge_base(args.dataset_size, args.sensitivity, rng);
    const std::string id = "base" + std::to_string(i);
    attack::MeasurementResult res;
    if (args.fast && !grid.empty()) {
      // One draw set serves the counts point and the whole sweep.
      std::vector<double> levels = grid;
      levels.push_back(args.alpha_star);
      const auto sweep =
          attack::roc_sweep(*mech, base, args.challenges, levels, rng);
      res = sweep.back().second;
      Json points = Json::array();
      for (std::size_t g = 0; g + 1 < sweep.size(); ++g) {
        Json p;
        p["alpha_star"] = sweep[g].first;
        p["x"] = sweep[g].second.x;
        p["y"] = sweep[g].second.y;
        points.push_back(std::move(p));
      }
      Json bj;
      bj["id"] = id;
      bj["points"] = std::move(points);
      sweep_bases.push_back(std::move(bj));
    } else if (args.fast) {
      res = attack::measure_mia_fast(*mech, base, args.challenges,
                                     args.alpha_star, rng);
    } else {
      res = attack::measure_mia(*mech, base, args.challenges, args.challenges,
                                args.m0, args.m1, args.alpha_star, rng);
    }
    counts.records.emplace_back(id, res.n0, res.n1, res.x, res.y);
    if (args.decisions_out) {
      Json dj;
      dj["id"] = id;
      dj["decisions0"] = decisions_to_json(res.decisions0);
      dj["decisions1"] = decisions_to_json(res.decisions1);
      decision_bases.push_back(std::move(dj));
    }
  }

  io::write_counts(counts, resolve_out(args.out));
  if (!grid.empty()) {
    if (!args.sweep_out)
      fail(Errc::validation, "alpha-grid given but no --sweep-out path");
    Json sweep;
    sweep["schema_version"] = "1";
    sweep["provenance"] = provenance;
    sweep["bases"] = std::move(sweep_bases);
    io::write_json(sweep, resolve_out(*args.sweep_out));
  }
  if (args.decisions_out) {
    Json dec;
    dec["schema_version"] = "1";
    dec["provenance"] = provenance;
    dec["bases"] = std::move(decision_bases);
    io::write_json(dec, resolve_out(*args.decisions_out));
  }
}

void run_estimate(const EstimateArgs& args) {
  const auto counts = io::read_counts(args.counts);
  const auto cfg = io::read_run_config(args.config);
  if (cfg.mode == model::LikelihoodMode::independent && counts.shared_n)
    fail(Errc::mode_mismatch,
         "counts were produced by the cross-fed harness (shared_n set) but the "
         "config uses the independent likelihood; drop shared_n to override");
  if (cfg.mode == model::LikelihoodMode::bivariate) {
    for (const auto& r : counts.records)
      if (r.n0 != r.n1 || r.n0 != counts.records.front().n0)
        fail(Errc::mode_mismatch,
             "bivariate mode needs a uniform challenge count across records");
  }
  estimate_into(counts.records, cfg, resolve_out(args.out_dir));
}

void run_diagnose(const DiagnoseArgs& args) {
  const auto trace = io::read_trace(args.trace);
  const fs::path out_dir = resolve_out(args.out_dir);
  ensure_dir(out_dir);
  Json out;
  out["schema_version"] = "1";
  out["rows"] = trace.series[0].size();
  Json params = Json::object();
  for (std::size_t c = 0; c < trace.columns.size(); ++c) {
    const auto& name = trace.columns[c];
    if (name == "iteration" || name == "accepted") continue;
    const auto& xs = trace.series[c];
    Json pj;
    try {
      const auto rho = diagnostics::acf(xs, 100);
      pj["acf"] = Json(std::vector<double>(rho.begin() + 1, rho.end()));
    } catch (const Error&) {
      pj["acf"] = nullptr;
    }
    pj["ess"] = diagnostics::effective_sample_size(xs);
    // Trace-plot series, decimated to at most 1e4 points.
    const std::size_t stride = xs.size() / 10'000 + 1;
    Json series = Json::array();
    for (std::size_t i = 0; i < xs.size(); i += stride) {
      series.push_back(Json::array(
          {static_cast<std::uint64_t>(trace.series[0][i]), xs[i]}));
    }
    pj["series"] = std::move(series);
    params[name] = std::move(pj);
  }
  out["parameters"] = std::move(params);
  io::write_json(out, out_dir / "diagnostics.json");
}

namespace {

void replicate_fig2(std::uint64_t seed, const fs::path& out_dir) {
  // Single attack imitating alpha = beta = 0.4 at N = 1000, strength held
  // fixed per run; the credible interval for eps tightens as s grows.
  const auto obs = testbed::scenario_fig2(1000);
  const std::vector<model::ChallengeObservation> records{obs};
  constexpr double kS[] = {0.1, 0.3, 0.5, 0.7, 0.9};
  constexpr double kPropVarEps[] = {0.25, 0.16, 0.09, 0.04, 0.01};
  Json per_s = Json::array();
  Json resolved = Json::array();
  for (int i = 0; i < 5; ++i) {
    io::RunConfig cfg;
    cfg.mode = model::LikelihoodMode::independent;
    cfg.hyper.delta = 0.05;
    cfg.sampler.mode = cfg.mode;
    cfg.sampler.iterations = 165'000;
    cfg.sampler.burn_in = 15'000;
    cfg.sampler.aux_count = 768;
    cfg.sampler.prop_var_eps = kPropVarEps[i];
    cfg.sampler.prop_var_s = 0.0;  // strength frozen at init_s
    cfg.sampler.seed = seed;
    cfg.sampler.stream = static_cast<std::uint64_t>(i);
    cfg.sampler.init_s = kS[i];
    cfg.sampler.init_eps = 1.0;
    const auto recs = mcmc::run(records, cfg.hyper, cfg.sampler);
    std::vector<double> eps;
    eps.reserve(recs.size());
    for (const auto& r : recs) eps.push_back(r.eps);
    const std::vector<double> probs{0.05, 0.5, 0.95};
    const auto q = diagnostics::quantiles(eps, probs);
    Json sj;
    sj["s"] = kS[i];
    sj["ci90"] = Json::array({q[0], q[2]});
    sj["median"] = q[1];
    sj["ci90_width"] = q[2] - q[0];
    sj["hist_eps"] = hist1d_json(eps, 60);
    per_s.push_back(std::move(sj));
    resolved.push_back(io::run_config_to_json(cfg));
  }
  Json report;
  report["schema_version"] = "1";
  report["experiment"] = "fig2-ci-vs-s";
  report["seed"] = seed;
  report["counts"] = Json{{"id", obs.id}, {"n0", obs.n0}, {"n1", obs.n1},
                          {"x", obs.x},   {"y", obs.y}};
  report["per_s"] = std::move(per_s);
  io::write_json(report, out_dir / "report.json");
  io::write_json(Json{{"experiment", "fig2-ci-vs-s"},
                      {"seed", seed},
                      {"runs", std::move(resolved)}},
                 out_dir / "resolved_config.json");
}

void replicate_scenario(const std::string& which, std::uint64_t seed,
                        const fs::path& out_dir) {
  std::vector<model::ChallengeObservation> records;
  if (which == "scenario-strong") {
    records = testbed::scenario_strong();
  } else {
    RngHandle rng(seed, kDataStream);
    records = testbed::generate_scenario_weak(10, 1000, rng);
  }
  io::RunConfig cfg;
  cfg.mode = model::LikelihoodMode::independent;
  cfg.hyper.delta = 0.05;
  cfg.sampler.mode = cfg.mode;
  cfg.sampler.iterations = 110'000;
  cfg.sampler.burn_in = 10'000;
  cfg.sampler.aux_count = 1000;
  cfg.sampler.seed = seed;
  io::CountsFile counts;
  counts.records = records;
  counts.provenance = Json{{"experiment", which}, {"seed", seed}};
  ensure_dir(out_dir);
  io::write_counts(counts, out_dir / "counts.json");
  estimate_into(records, cfg, out_dir);
  Json report;
  report["schema_version"] = "1";
  report["experiment"] = which;
  report["seed"] = seed;
  report["summary_file"] = "summary.json";
  io::write_json(report, out_dir / "report.json");
}

void replicate_oracle_check(std::uint64_t seed, const fs::path& out_dir) {
  // Single challenge with a strength pinned by a near-degenerate Beta prior;
  // the sampled eps marginal must match deterministic grid quadrature.
  const model::ChallengeObservation obs("oracle", 100, 100, 40, 40);
  io::RunConfig cfg;
  cfg.mode = model::LikelihoodMode::independent;
  cfg.hyper.delta = 0.05;
  cfg.hyper.beta_a = 5000.0;
  cfg.hyper.beta_b = 556.0;
  cfg.sampler.mode = cfg.mode;
  cfg.sampler.iterations = 1'100'000;
  cfg.sampler.burn_in = 100'000;
  cfg.sampler.aux_count = 512;
  cfg.sampler.prop_var_eps = 0.09;
  cfg.sampler.prop_var_s = 1e-6;
  cfg.sampler.seed = seed;
  cfg.sampler.init_eps = 0.5;
  cfg.sampler.init_s = 0.9;
  const std::vector<model::ChallengeObservation> records{obs};
  const auto recs = mcmc::run(records, cfg.hyper, cfg.sampler);
  std::vector<double> eps;
  eps.reserve(recs.size());
  for (const auto& r : recs) eps.push_back(r.eps);

  const double s_fixed = cfg.hyper.beta_a / (cfg.hyper.beta_a + cfg.hyper.beta_b);
  const auto ref = quadrature::posterior_eps_cdf(obs, cfg.hyper, s_fixed, 8.0,
                                                 0.005, 400);
  const double sup = quadrature::sup_cdf_distance(eps, ref);

  ensure_dir(out_dir);
  std::vector<double> sorted(eps);
  std::sort(sorted.begin(), sorted.end());
  std::ofstream cdf_out(out_dir / "cdf.csv");
  if (!cdf_out) fail(Errc::io, "cannot write cdf.csv");
  cdf_out << "eps,quadrature_cdf,mcmc_cdf\n";
  for (std::size_t m = 0; m < ref.eps.size(); ++m) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), ref.eps[m]);
    const double emp = static_cast<double>(std::distance(sorted.begin(), it)) /
                       static_cast<double>(sorted.size());
    cdf_out << io::format_double(ref.eps[m]) << ','
            << io::format_double(ref.cdf[m]) << ',' << io::format_double(emp)
            << '\n';
  }
  Json report;
  report["schema_version"] = "1";
  report["experiment"] = "oracle-check";
  report["seed"] = seed;
  report["sup_distance"] = sup;
  report["samples"] = eps.size();
  report["grid"] = Json{{"eps_hi", 8.0}, {"eps_step", 0.005}, {"latent_cells", 400}};
  io::write_json(report, out_dir / "report.json");
  io::write_json(io::run_config_to_json(cfg), out_dir / "resolved_config.json");
}

}  // namespace

void run_replicate(const ReplicateArgs& args) {
  const fs::path out_dir = resolve_out(args.out_dir);
  ensure_dir(out_dir);
  if (args.experiment == "fig2-ci-vs-s") {
    replicate_fig2(args.seed, out_dir);
  } else if (args.experiment == "scenario-weak" ||
             args.experiment == "scenario-strong") {
    replicate_scenario(args.experiment, args.seed, out_dir);
  } else if (args.experiment == "oracle-check") {
    replicate_oracle_check(args.seed, out_dir);
  } else {
    fail(Errc::unknown_id, "unknown experiment '" + args.experiment + "'");
  }
}

}  // namespace dpaudit::cli
