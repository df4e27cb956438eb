#include "dpaudit/testbed.hpp"

#include <cmath>
#include <string>

#include "dpaudit/stats.hpp"

namespace dpaudit::testbed {

namespace {

double laplace_cdf(double x, double scale) {
  return x < 0.0 ? 0.5 * std::exp(x / scale)
                 : 1.0 - 0.5 * std::exp(-x / scale);
}

double laplace_inv_cdf(double u, double scale) {
  return u <= 0.5 ? scale * std::log(2.0 * u)
                  : -scale * std::log(2.0 * (1.0 - u));
}

class LaplaceSumMechanism final : public Mechanism {
 public:
  LaplaceSumMechanism(double sensitivity, double eps_true)
      : scale_(sensitivity / eps_true), name_("laplace-sum") {
    if (!(sensitivity > 0.0) || !(eps_true > 0.0))
      fail(Errc::validation, "laplace_sum_mechanism: nonpositive parameter");
    const double shift = sensitivity;  // challenge record contributes this much
    const double scale = scale_;
    analytic_.beta_at_alpha = [shift, scale](double alpha) {
      if (alpha <= 0.0) return 1.0;
      if (alpha >= 1.0) return 0.0;
      const double t = laplace_inv_cdf(1.0 - alpha, scale);
      return laplace_cdf(t - shift, scale);
    };
    const auto curve = analytic_.beta_at_alpha;
    analytic_.eps_at_delta = [curve](double delta) {
      return eps_from_tradeoff_curve(curve, delta);
    };
  }
  double draw(const Dataset& d, RngHandle& rng) const override {
    return d.sum + stats::laplace_draw(rng, 0.0, scale_);
  }
  double score(double /*z*/, double output) const override { return output; }
  const AnalyticPrivacy* analytic() const override { return &analytic_; }
  const std::string& name() const override { return name_; }

 private:
  double scale_;
  AnalyticPrivacy analytic_;
  std::string name_;
};

class GaussianSumMechanism final : public Mechanism {
 public:
  GaussianSumMechanism(double sensitivity, double sigma)
      : var_(sigma * sigma), name_("gaussian-sum") {
    if (!(sensitivity > 0.0) || !(sigma > 0.0))
      fail(Errc::validation, "gaussian_sum_mechanism: nonpositive parameter");
    const double mu = sensitivity / sigma;
    analytic_.beta_at_alpha = [mu](double alpha) {
      if (alpha <= 0.0) return 1.0;
      if (alpha >= 1.0) return 0.0;
      return stats::std_normal_cdf(stats::std_normal_inv_cdf(1.0 - alpha) - mu);
    };
    const auto curve = analytic_.beta_at_alpha;
    analytic_.eps_at_delta = [curve](double delta) {
      return eps_from_tradeoff_curve(curve, delta);
    };
  }
  double draw(const Dataset& d, RngHandle& rng) const override {
    return d.sum + stats::normal_draw(rng, 0.0, var_);
  }
  double score(double /*z*/, double output) const override { return output; }
  const AnalyticPrivacy* analytic() const override { return &analytic_; }
  const std::string& name() const override { return name_; }

 private:
  double var_;
  AnalyticPrivacy analytic_;
  std::string name_;
};

}  // namespace

std::unique_ptr<Mechanism> laplace_sum_mechanism(double sensitivity,
                                                 double eps_true) {
  return std::make_unique<LaplaceSumMechanism>(sensitivity, eps_true);
}

std::unique_ptr<Mechanism> gaussian_sum_mechanism(double sensitivity,
                                                  double sigma) {
  return std::make_unique<GaussianSumMechanism>(sensitivity, sigma);
}

double eps_from_tradeoff_curve(const std::function<double(double)>& beta_at_alpha,
                               double delta) {
  if (!(delta >= 0.0 && delta < 1.0))
    fail(Errc::validation, "eps_from_tradeoff_curve: delta outside [0,1)");
  // Largest violation of the lower boundary line beta >= 1 - delta - e^eps a;
  // the violation is concave in alpha, so golden-section search nails the sup.
  const auto max_violation = [&](double eps) {
    const double e = std::exp(eps);
    const auto g = [&](double a) { return 1.0 - delta - e * a - beta_at_alpha(a); };
    const double inv_phi = 0.6180339887498949;
    double lo = 0.0, hi = 1.0;
    double m1 = hi - inv_phi * (hi - lo), m2 = lo + inv_phi * (hi - lo);
    double g1 = g(m1), g2 = g(m2);
    for (int i = 0; i < 160; ++i) {
      if (g1 < g2) {
        lo = m1;
        m1 = m2;
        g1 = g2;
        m2 = lo + inv_phi * (hi - lo);
        g2 = g(m2);
      } else {
        hi = m2;
        m2 = m1;
        g2 = g1;
        m1 = hi - inv_phi * (hi - lo);
        g1 = g(m1);
      }
    }
    return std::max({g(0.5 * (lo + hi)), g(0.0), g(1.0)});
  };
  if (max_violation(0.0) <= 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (max_violation(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e4) fail(Errc::numeric, "eps_from_tradeoff_curve: no finite eps");
  }
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (max_violation(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

ChallengeBase make_challenge_base(std::size_t size, double sensitivity,
                                  RngHandle& rng) {
  std::vector<double> values(size);
  for (auto& v : values) v = rng.uniform();
  return ChallengeBase(Dataset(std::move(values)), sensitivity);
}

std::vector<model::ChallengeObservation> generate_scenario_weak(
    std::uint32_t n, std::uint32_t N, RngHandle& rng) {
  if (n < 1 || N < 1)
    fail(Errc::validation, "generate_scenario_weak: n, N must be >= 1");
  std::vector<model::ChallengeObservation> out;
  out.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const double alpha = stats::beta_draw(rng, 10.0, 10.0);
    const double beta = stats::beta_draw(rng, 10.0, 10.0);
    const auto x = static_cast<std::uint32_t>(stats::binomial_draw(rng, N, alpha));
    const auto y = static_cast<std::uint32_t>(stats::binomial_draw(rng, N, beta));
    out.emplace_back("weak" + std::to_string(i), N, N, x, y);
  }
  return out;
}

std::vector<model::ChallengeObservation> scenario_strong() {
  static constexpr std::uint32_t xs[10] = {40, 50,  60,  100, 100,
                                           110, 120, 200, 200, 200};
  static constexpr std::uint32_t ys[10] = {250, 200, 150, 100, 120,
                                           100, 100, 80,  70,  60};
  std::vector<model::ChallengeObservation> out;
  out.reserve(10);
  for (int i = 0; i < 10; ++i)
    out.emplace_back("strong" + std::to_string(i), 1000, 1000, xs[i], ys[i]);
  return out;
}

model::ChallengeObservation scenario_fig2(std::uint32_t N) {
  if (N < 1) fail(Errc::validation, "scenario_fig2: N < 1");
  const auto c = static_cast<std::uint32_t>(0.4 * static_cast<double>(N));
  return model::ChallengeObservation("fig2", N, N, c, c);
}

GroupedScenario generate_grouped(std::uint32_t n_groups,
                                 std::span<const std::uint32_t> sizes,
                                 double eps, double delta, double s,
                                 double spread, std::uint32_t N,
                                 RngHandle& rng) {
  if (sizes.size() != n_groups)
    fail(Errc::validation, "generate_grouped: sizes length != groups");
  if (!(spread >= 0.0))
    fail(Errc::validation, "generate_grouped: negative spread");
  const region::PrivacyParams pp(eps, delta);
  const region::Strength st(s);
  GroupedScenario out;
  out.centers.reserve(n_groups);
  out.groups.resize(n_groups);
  const double sd = std::sqrt(spread);
  for (std::uint32_t g = 0; g < n_groups; ++g) {
    const region::ErrorPoint center = region::sample_uniform_shell(pp, st, rng);
    out.centers.push_back(center);
    auto& members = out.groups[g];
    members.reserve(sizes[g]);
    for (std::uint32_t m = 0; m < sizes[g]; ++m) {
      double a, b;
      do {  // truncate the member distribution to the unit square
        a = center.alpha + sd * stats::std_normal_inv_cdf(rng.uniform());
        b = center.beta + sd * stats::std_normal_inv_cdf(rng.uniform());
      } while (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0));
      const auto x = static_cast<std::uint32_t>(stats::binomial_draw(rng, N, a));
      const auto y = static_cast<std::uint32_t>(stats::binomial_draw(rng, N, b));
      members.emplace_back(
          "g" + std::to_string(g) + ".m" + std::to_string(m), N, N, x, y);
    }
  }
  return out;
}

}  // namespace dpaudit::testbed
