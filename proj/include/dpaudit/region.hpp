#ifndef DPAUDIT_REGION_HPP_
#define DPAUDIT_REGION_HPP_

#include <cmath>

#include "dpaudit/errors.hpp"
#include "dpaudit/rng.hpp"

namespace dpaudit::region {

// Privacy guarantee (eps, delta) under audit.
struct PrivacyParams {
  PrivacyParams(double eps_, double delta_) : eps(eps_), delta(delta_) {
    if (!(eps >= 0.0)) fail(Errc::validation, "PrivacyParams: eps < 0");
    if (!(delta >= 0.0 && delta < 1.0))
      fail(Errc::validation, "PrivacyParams: delta outside [0,1)");
  }
  double eps;
  double delta;
};

// One attack's type I / type II error probability pair.
struct ErrorPoint {
  ErrorPoint(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
    if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0))
      fail(Errc::validation, "ErrorPoint: coordinate outside [0,1]");
  }
  double alpha;
  double beta;
};

// Attack strength in [0,1). s = 1 would make the shell measure-zero, so it is
// rejected here; tests believed near-optimal are expressed through priors
// concentrated just below 1.
struct Strength {
  explicit Strength(double s_) : s(s_) {
    if (!(s >= 0.0 && s < 1.0))
      fail(Errc::validation, "Strength: s outside [0,1)");
  }
  double s;
};

// Fixed-parameter view of the trade-off region
//   R(eps, delta) = { (a,b) in [0,1]^2 :  a + e^eps b >= 1 - delta,
//                                         b + e^eps a >= 1 - delta,
//                                         b + e^eps a <= e^eps + delta,
//                                         a + e^eps b <= e^eps + delta }.
// All four inequalities are multiplied through by e^-eps so nothing overflows
// for large eps.
struct RegionView {
  explicit RegionView(const PrivacyParams& pp)
      : e_neg(std::exp(-pp.eps)),
        delta(pp.delta),
        lower((1.0 - pp.delta) * e_neg),
        upper(1.0 + pp.delta * e_neg) {}
  bool contains(double alpha, double beta) const {
    const double u = e_neg * alpha + beta;
    const double v = e_neg * beta + alpha;
    return u >= lower && v >= lower && v <= upper && u <= upper;
  }
  double e_neg;
  double delta;
  double lower;
  double upper;
};

// Combined membership test for the shell R_s = R(eps,delta) \ R(s eps, s delta).
struct ShellView {
  ShellView(const PrivacyParams& pp, const Strength& s)
      : outer(pp), inner(PrivacyParams(s.s * pp.eps, s.s * pp.delta)) {}
  bool contains(double alpha, double beta) const {
    return outer.contains(alpha, beta) && !inner.contains(alpha, beta);
  }
  RegionView outer;
  RegionView inner;
};

bool contains(const ErrorPoint& p, const PrivacyParams& pp);
bool shell_contains(const ErrorPoint& p, const PrivacyParams& pp,
                    const Strength& s);

// Closed-form area
//   |R_s| = 2 [ (1 - s delta)^2 e^{-s eps} / (1 + e^{-s eps})
//             - (1 - delta)^2   e^{-eps}   / (1 + e^{-eps}) ].
// Throws Errc::degenerate_region when the value falls below 1e-12 (eps =
// delta = 0, or s numerically 1), so density/weight computations never blow up.
double shell_area(const PrivacyParams& pp, const Strength& s);

// -log(shell_area) inside the shell, -inf outside.
double shell_log_density(const ErrorPoint& p, const PrivacyParams& pp,
                         const Strength& s);

// Exact rejection sampler from Unif([0,1]^2); errors out after 1e7
// consecutive misses (the shell was degenerate in all supported uses anyway).
ErrorPoint sample_uniform_shell(const PrivacyParams& pp, const Strength& s,
                                RngHandle& rng);

// Smallest eps such that p lies in R(eps, delta); +inf when no finite eps
// does (a coordinate exactly 0 or 1 with positive opposing margin).
double required_eps(const ErrorPoint& p, double delta);

}  // namespace dpaudit::region

#endif  // DPAUDIT_REGION_HPP_
