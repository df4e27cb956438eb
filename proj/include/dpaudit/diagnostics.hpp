#ifndef DPAUDIT_DIAGNOSTICS_HPP_
#define DPAUDIT_DIAGNOSTICS_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace dpaudit::diagnostics {

// Sample autocorrelation with the biased (1/M) normalization; lag 0 is 1.
// Errors (Errc::numeric) on a zero-variance sequence, Errc::validation on an
// empty one.
std::vector<double> acf(std::span<const double> samples, std::size_t max_lag);

// Empirical quantiles by linear interpolation between order statistics.
std::vector<double> quantiles(std::span<const double> samples,
                              std::span<const double> probs);

struct Hist2d {
  std::size_t bins;
  double x_lo, x_hi, y_lo, y_hi;
  std::vector<std::vector<std::size_t>> counts;  // [x bin][y bin]
};

Hist2d hist2d(std::span<const double> xs, std::span<const double> ys,
              std::size_t bins);

// Integrated-autocorrelation ESS with the usual initial-positive-sequence
// truncation; clamped to the sample count.
double effective_sample_size(std::span<const double> samples);

}  // namespace dpaudit::diagnostics

#endif  // DPAUDIT_DIAGNOSTICS_HPP_
