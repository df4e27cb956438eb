#include "dpaudit/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dpaudit/diagnostics.hpp"

namespace dpaudit::io {

namespace {

constexpr const char* kSchemaVersion = "1";

void check_known_keys(const Json& obj, std::initializer_list<const char*> known,
                      const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known)
      if (key == k) ok = true;
    if (!ok) fail(Errc::validation, "unknown key '" + key + "' in " + where);
  }
}

double require_number(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key))
    fail(Errc::validation, std::string("missing '") + key + "' in " + where);
  if (!obj[key].is_number())
    fail(Errc::validation, std::string("'") + key + "' must be a number in " + where);
  return obj[key].get<double>();
}

double number_or(const Json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    fail(Errc::validation, std::string("'") + key + "' must be a number");
  return obj[key].get<double>();
}

std::uint64_t uint_or(const Json& obj, const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_unsigned())
    fail(Errc::validation, std::string("'") + key + "' must be a nonnegative integer");
  return obj[key].get<std::uint64_t>();
}

void require_schema(const Json& j, const std::string& where) {
  if (!j.contains("schema_version") || !j["schema_version"].is_string() ||
      j["schema_version"].get<std::string>() != kSchemaVersion)
    fail(Errc::validation, where + ": schema_version must be \"1\"");
}

std::vector<double> column(const std::vector<mcmc::SampleRecord>& recs,
                           double mcmc::SampleRecord::* field) {
  std::vector<double> out;
  out.reserve(recs.size());
  for (const auto& r : recs) out.push_back(r.*field);
  return out;
}

Json parameter_summary(const std::vector<double>& samples) {
  static const std::vector<double> probs = {0.01, 0.05, 0.25, 0.5,
                                            0.75, 0.95, 0.99};
  const auto q = diagnostics::quantiles(samples, probs);
  Json out;
  Json qj;
  const char* labels[] = {"1", "5", "25", "50", "75", "95", "99"};
  for (std::size_t i = 0; i < probs.size(); ++i) qj[labels[i]] = q[i];
  out["quantiles"] = qj;
  out["ci90"] = Json::array({q[1], q[5]});
  double mean = 0.0;
  for (double v : samples) mean += v;
  out["mean"] = mean / static_cast<double>(samples.size());
  out["ess"] = diagnostics::effective_sample_size(samples);
  try {
    const auto rho = diagnostics::acf(samples, 100);
    out["acf"] = Json(std::vector<double>(rho.begin() + 1, rho.end()));
  } catch (const Error&) {
    out["acf"] = nullptr;  // frozen parameter: zero variance
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse, path.string() + ": " + e.what());
  }
  return j;
}

void write_json(const Json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::io, "cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) fail(Errc::io, "failed writing " + path.string());
}

CountsFile read_counts(const std::filesystem::path& path) {
  const Json j = read_json(path);
  require_schema(j, "counts file");
  check_known_keys(j, {"schema_version", "shared_n", "provenance", "records"},
                   "counts file");
  if (!j.contains("records") || !j["records"].is_array())
    fail(Errc::validation, "counts file: missing 'records' array");
  CountsFile out;
  if (j.contains("shared_n")) {
    if (!j["shared_n"].is_number_unsigned())
      fail(Errc::validation, "counts file: shared_n must be a nonnegative integer");
    out.shared_n = j["shared_n"].get<std::uint32_t>();
  }
  if (j.contains("provenance")) out.provenance = j["provenance"];
  for (const auto& rec : j["records"]) {
    check_known_keys(rec, {"id", "n0", "n1", "x", "y"}, "counts record");
    if (!rec.contains("id") || !rec["id"].is_string())
      fail(Errc::validation, "counts record: missing string 'id'");
    const auto get = [&](const char* key) {
      if (!rec.contains(key) || !rec[key].is_number_unsigned())
        fail(Errc::validation,
             std::string("counts record: '") + key + "' must be a nonnegative integer");
      return rec[key].get<std::uint32_t>();
    };
    out.records.emplace_back(rec["id"].get<std::string>(), get("n0"), get("n1"),
                             get("x"), get("y"));
  }
  if (out.shared_n) {
    for (const auto& r : out.records)
      if (r.n0 != *out.shared_n || r.n1 != *out.shared_n)
        fail(Errc::validation,
             "counts file: shared_n set but record counts differ from it");
  }
  return out;
}

void write_counts(const CountsFile& counts, const std::filesystem::path& path) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  if (counts.shared_n) j["shared_n"] = *counts.shared_n;
  if (!counts.provenance.is_null()) j["provenance"] = counts.provenance;
  Json records = Json::array();
  for (const auto& r : counts.records) {
    Json rec;
    rec["id"] = r.id;
    rec["n0"] = r.n0;
    rec["n1"] = r.n1;
    rec["x"] = r.x;
    rec["y"] = r.y;
    records.push_back(std::move(rec));
  }
  j["records"] = std::move(records);
  write_json(j, path);
}

RunConfig run_config_from_json(const Json& j) {
  require_schema(j, "config");
  check_known_keys(j, {"schema_version", "mode", "delta", "hyper", "sampler"},
                   "config");
  RunConfig cfg;
  if (j.contains("mode")) {
    const std::string mode = j["mode"].get<std::string>();
    if (mode == "independent")
      cfg.mode = model::LikelihoodMode::independent;
    else if (mode == "bivariate")
      cfg.mode = model::LikelihoodMode::bivariate;
    else
      fail(Errc::validation, "config: mode must be independent|bivariate");
  }
  cfg.hyper.delta = require_number(j, "delta", "config");
  if (j.contains("hyper")) {
    const Json& h = j["hyper"];
    check_known_keys(h,
                     {"sigma_eps_sq", "beta_a", "beta_b", "sigma_tau_sq",
                      "sigma_rho_sq"},
                     "config.hyper");
    cfg.hyper.sigma_eps_sq = number_or(h, "sigma_eps_sq", cfg.hyper.sigma_eps_sq);
    cfg.hyper.beta_a = number_or(h, "beta_a", cfg.hyper.beta_a);
    cfg.hyper.beta_b = number_or(h, "beta_b", cfg.hyper.beta_b);
    cfg.hyper.sigma_tau_sq = number_or(h, "sigma_tau_sq", cfg.hyper.sigma_tau_sq);
    // sigma_rho_sq is accepted for compatibility; the conditional prior for
    // rho is parameter-free, so the value is ignored.
    number_or(h, "sigma_rho_sq", 0.0);
  }
  cfg.hyper.validate();
  if (j.contains("sampler")) {
    const Json& s = j["sampler"];
    check_known_keys(s,
                     {"iterations", "burn_in", "aux_count", "prop_var_eps",
                      "prop_var_s", "prop_var_tau", "prop_var_rho", "seed",
                      "stream", "chains", "init"},
                     "config.sampler");
    cfg.sampler.iterations = uint_or(s, "iterations", cfg.sampler.iterations);
    cfg.sampler.burn_in = uint_or(s, "burn_in", cfg.sampler.burn_in);
    cfg.sampler.aux_count =
        static_cast<std::uint32_t>(uint_or(s, "aux_count", cfg.sampler.aux_count));
    cfg.sampler.prop_var_eps = number_or(s, "prop_var_eps", cfg.sampler.prop_var_eps);
    cfg.sampler.prop_var_s = number_or(s, "prop_var_s", cfg.sampler.prop_var_s);
    cfg.sampler.prop_var_tau = number_or(s, "prop_var_tau", cfg.sampler.prop_var_tau);
    cfg.sampler.prop_var_rho = number_or(s, "prop_var_rho", cfg.sampler.prop_var_rho);
    cfg.sampler.seed = uint_or(s, "seed", cfg.sampler.seed);
    cfg.sampler.stream = uint_or(s, "stream", cfg.sampler.stream);
    cfg.chains = static_cast<std::uint32_t>(uint_or(s, "chains", cfg.chains));
    if (s.contains("init")) {
      const Json& init = s["init"];
      check_known_keys(init, {"eps", "s", "tau", "rho"}, "config.sampler.init");
      cfg.sampler.init_eps = number_or(init, "eps", cfg.sampler.init_eps);
      cfg.sampler.init_s = number_or(init, "s", cfg.sampler.init_s);
      cfg.sampler.init_tau = number_or(init, "tau", cfg.sampler.init_tau);
      cfg.sampler.init_rho = number_or(init, "rho", cfg.sampler.init_rho);
    }
  }
  cfg.sampler.mode = cfg.mode;
  cfg.sampler.validate();
  if (cfg.chains < 1) fail(Errc::validation, "config: chains < 1");
  return cfg;
}

RunConfig read_run_config(const std::filesystem::path& path) {
  return run_config_from_json(read_json(path));
}

Json run_config_to_json(const RunConfig& cfg) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["mode"] =
      cfg.mode == model::LikelihoodMode::independent ? "independent" : "bivariate";
  j["delta"] = cfg.hyper.delta;
  Json h;
  h["sigma_eps_sq"] = cfg.hyper.sigma_eps_sq;
  h["beta_a"] = cfg.hyper.beta_a;
  h["beta_b"] = cfg.hyper.beta_b;
  h["sigma_tau_sq"] = cfg.hyper.sigma_tau_sq;
  j["hyper"] = std::move(h);
  Json s;
  s["iterations"] = cfg.sampler.iterations;
  s["burn_in"] = cfg.sampler.burn_in;
  s["aux_count"] = cfg.sampler.aux_count;
  s["prop_var_eps"] = cfg.sampler.prop_var_eps;
  s["prop_var_s"] = cfg.sampler.prop_var_s;
  s["prop_var_tau"] = cfg.sampler.prop_var_tau;
  s["prop_var_rho"] = cfg.sampler.prop_var_rho;
  s["seed"] = cfg.sampler.seed;
  s["stream"] = cfg.sampler.stream;
  s["chains"] = cfg.chains;
  Json init;
  init["eps"] = cfg.sampler.init_eps;
  init["s"] = cfg.sampler.init_s;
  init["tau"] = cfg.sampler.init_tau;
  init["rho"] = cfg.sampler.init_rho;
  s["init"] = std::move(init);
  j["sampler"] = std::move(s);
  return j;
}

void write_trace(std::span<const mcmc::SampleRecord> records,
                 model::LikelihoodMode mode,
                 const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::io, "cannot open " + path.string() + " for writing");
  const bool bivariate = mode == model::LikelihoodMode::bivariate;
  out << (bivariate ? "iteration,eps,s,tau,rho,accepted\n"
                    : "iteration,eps,s,accepted\n");
  for (const auto& r : records) {
    out << r.iteration << ',' << format_double(r.eps) << ','
        << format_double(r.s);
    if (bivariate)
      out << ',' << format_double(r.tau) << ',' << format_double(r.rho);
    out << ',' << (r.accepted ? 1 : 0) << '\n';
  }
  if (!out) fail(Errc::io, "failed writing " + path.string());
}

Trace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) fail(Errc::parse, "empty trace " + path.string());
  Trace trace;
  std::stringstream header(line);
  std::string name;
  while (std::getline(header, name, ',')) trace.columns.push_back(name);
  if (trace.columns.size() < 2)
    fail(Errc::parse, "trace header needs at least two columns");
  trace.series.resize(trace.columns.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(row, cell, ',')) {
      if (col >= trace.columns.size())
        fail(Errc::parse, path.string() + ": too many cells on line " +
                              std::to_string(line_no));
      try {
        trace.series[col].push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(Errc::parse, path.string() + ": bad number on line " +
                              std::to_string(line_no));
      }
      ++col;
    }
    if (col != trace.columns.size())
      fail(Errc::parse,
           path.string() + ": short row on line " + std::to_string(line_no));
  }
  if (trace.series[0].empty())
    fail(Errc::parse, path.string() + ": trace has no rows");
  return trace;
}

Json summarize_chains(const std::vector<std::vector<mcmc::SampleRecord>>& chains,
                      model::LikelihoodMode mode) {
  if (chains.empty()) fail(Errc::validation, "summarize_chains: no chains");
  const bool bivariate = mode == model::LikelihoodMode::bivariate;
  Json out;
  out["schema_version"] = kSchemaVersion;
  Json per_chain = Json::array();
  std::vector<double> pooled_eps, pooled_s;
  for (const auto& recs : chains) {
    if (recs.empty()) fail(Errc::validation, "summarize_chains: empty chain");
    Json cj;
    const auto eps = column(recs, &mcmc::SampleRecord::eps);
    const auto s = column(recs, &mcmc::SampleRecord::s);
    cj["samples"] = recs.size();
    double acc = 0.0;
    for (const auto& r : recs) acc += r.accepted ? 1.0 : 0.0;
    cj["acceptance_rate"] = acc / static_cast<double>(recs.size());
    cj["eps"] = parameter_summary(eps);
    cj["s"] = parameter_summary(s);
    if (bivariate) {
      cj["tau"] = parameter_summary(column(recs, &mcmc::SampleRecord::tau));
      cj["rho"] = parameter_summary(column(recs, &mcmc::SampleRecord::rho));
    }
    per_chain.push_back(std::move(cj));
    pooled_eps.insert(pooled_eps.end(), eps.begin(), eps.end());
    pooled_s.insert(pooled_s.end(), s.begin(), s.end());
  }
  out["chains"] = std::move(per_chain);
  Json pooled;
  pooled["eps"] = parameter_summary(pooled_eps);
  pooled["s"] = parameter_summary(pooled_s);
  out["pooled"] = std::move(pooled);

  const auto h = diagnostics::hist2d(pooled_eps, pooled_s, 50);
  Json hist;
  hist["bins"] = h.bins;
  hist["eps_range"] = Json::array({h.x_lo, h.x_hi});
  hist["s_range"] = Json::array({h.y_lo, h.y_hi});
  hist["counts"] = h.counts;
  out["hist2d_eps_s"] = std::move(hist);
  return out;
}

}  // namespace dpaudit::io
