#include "dpaudit/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "dpaudit/errors.hpp"

namespace dpaudit::diagnostics {

std::vector<double> acf(std::span<const double> samples, std::size_t max_lag) {
  const std::size_t m = samples.size();
  if (m == 0) fail(Errc::validation, "acf: empty sample");
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(m);
  double c0 = 0.0;
  for (double v : samples) c0 += (v - mean) * (v - mean);
  c0 /= static_cast<double>(m);
  if (!(c0 > 0.0)) fail(Errc::numeric, "acf: zero-variance sequence");
  const std::size_t lags = std::min(max_lag, m - 1);
  std::vector<double> out(lags + 1, 0.0);
  out[0] = 1.0;
  for (std::size_t lag = 1; lag <= lags; ++lag) {
    double c = 0.0;
    for (std::size_t t = 0; t + lag < m; ++t)
      c += (samples[t] - mean) * (samples[t + lag] - mean);
    out[lag] = c / (static_cast<double>(m) * c0);
  }
  return out;
}

std::vector<double> quantiles(std::span<const double> samples,
                              std::span<const double> probs) {
  if (samples.empty()) fail(Errc::validation, "quantiles: empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(probs.size());
  const double n = static_cast<double>(sorted.size());
  for (double p : probs) {
    if (!(p > 0.0 && p < 1.0))
      fail(Errc::validation, "quantiles: prob outside (0,1)");
    const double h = (n - 1.0) * p;
    const std::size_t i = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(i);
    const double lo = sorted[i];
    const double hi = sorted[std::min(i + 1, sorted.size() - 1)];
    out.push_back(lo + frac * (hi - lo));
  }
  return out;
}

Hist2d hist2d(std::span<const double> xs, std::span<const double> ys,
              std::size_t bins) {
  if (xs.empty() || xs.size() != ys.size())
    fail(Errc::validation, "hist2d: empty or mismatched inputs");
  if (bins == 0) fail(Errc::validation, "hist2d: zero bins");
  Hist2d h;
  h.bins = bins;
  auto [x_min, x_max] = std::minmax_element(xs.begin(), xs.end());
  auto [y_min, y_max] = std::minmax_element(ys.begin(), ys.end());
  h.x_lo = *x_min;
  h.x_hi = *x_max;
  h.y_lo = *y_min;
  h.y_hi = *y_max;
  h.counts.assign(bins, std::vector<std::size_t>(bins, 0));
  const double x_span = h.x_hi > h.x_lo ? h.x_hi - h.x_lo : 1.0;
  const double y_span = h.y_hi > h.y_lo ? h.y_hi - h.y_lo : 1.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto idx = [&](double v, double lo, double span) {
      const double f = (v - lo) / span;
      const auto b = static_cast<std::size_t>(f * static_cast<double>(bins));
      return std::min(b, bins - 1);
    };
    ++h.counts[idx(xs[i], h.x_lo, x_span)][idx(ys[i], h.y_lo, y_span)];
  }
  return h;
}

double effective_sample_size(std::span<const double> samples) {
  const std::size_t m = samples.size();
  if (m < 4) return static_cast<double>(m);
  const std::size_t max_lag = std::min<std::size_t>(m - 2, 2000);
  std::vector<double> rho;
  try {
    rho = acf(samples, max_lag);
  } catch (const Error&) {
    return static_cast<double>(m);  // constant sequence
  }
  // Sum paired autocorrelations while the pair sums stay positive.
  double tau = 1.0;
  for (std::size_t lag = 1; lag + 1 < rho.size(); lag += 2) {
    const double pair = rho[lag] + rho[lag + 1];
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
  }
  const double ess = static_cast<double>(m) / tau;
  return std::min(ess, static_cast<double>(m));
}

}  // namespace dpaudit::diagnostics
