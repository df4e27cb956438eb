#include "dpaudit/region.hpp"

#include <cmath>
#include <limits>

namespace dpaudit::region {

namespace {
constexpr double kAreaFloor = 1e-12;
constexpr std::uint64_t kMaxRejections = 10'000'000;
constexpr double kInfRatio = std::numeric_limits<double>::infinity();

double corner_mass(double eps, double delta) {
  const double e = std::exp(-eps);
  const double one_minus = 1.0 - delta;
  return one_minus * one_minus * e / (1.0 + e);
}
}  // namespace

bool contains(const ErrorPoint& p, const PrivacyParams& pp) {
  return RegionView(pp).contains(p.alpha, p.beta);
}

bool shell_contains(const ErrorPoint& p, const PrivacyParams& pp,
                    const Strength& s) {
  return ShellView(pp, s).contains(p.alpha, p.beta);
}

double shell_area(const PrivacyParams& pp, const Strength& s) {
  const double area =
      2.0 * (corner_mass(s.s * pp.eps, s.s * pp.delta) - corner_mass(pp.eps, pp.delta));
  if (!(area > kAreaFloor))
    fail(Errc::degenerate_region, "shell_area: region is (numerically) empty");
  return area;
}

double shell_log_density(const ErrorPoint& p, const PrivacyParams& pp,
                         const Strength& s) {
  const double area = shell_area(pp, s);
  if (!shell_contains(p, pp, s))
    return -std::numeric_limits<double>::infinity();
  return -std::log(area);
}

ErrorPoint sample_uniform_shell(const PrivacyParams& pp, const Strength& s,
                                RngHandle& rng) {
  shell_area(pp, s);  // reject degenerate shells up front
  const ShellView shell(pp, s);
  for (std::uint64_t i = 0; i < kMaxRejections; ++i) {
    const double a = rng.uniform();
    const double b = rng.uniform();
    if (shell.contains(a, b)) return ErrorPoint(a, b);
  }
  fail(Errc::degenerate_region,
       "sample_uniform_shell: rejection sampler exhausted");
}

double required_eps(const ErrorPoint& p, double delta) {
  if (!(delta >= 0.0 && delta < 1.0))
    fail(Errc::validation, "required_eps: delta outside [0,1)");
  // Each supporting line gives a lower bound on e^eps; take the largest.
  const auto ratio = [](double num, double den) {
    if (num <= 0.0) return 1.0;  // constraint inactive
    if (den <= 0.0) return kInfRatio;
    return num / den;
  };
  const double e = std::max(
      {1.0, ratio(1.0 - delta - p.alpha, p.beta),
       ratio(1.0 - delta - p.beta, p.alpha),
       ratio(p.beta - delta, 1.0 - p.alpha),
       ratio(p.alpha - delta, 1.0 - p.beta)});
  return std::log(e);
}

}  // namespace dpaudit::region
