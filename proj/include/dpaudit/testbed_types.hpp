#ifndef DPAUDIT_TESTBED_TYPES_HPP_
#define DPAUDIT_TESTBED_TYPES_HPP_

#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "dpaudit/errors.hpp"
#include "dpaudit/rng.hpp"

namespace dpaudit::testbed {

// Tiny scalar dataset; the ground-truth mechanisms only ever query its sum.
struct Dataset {
  explicit Dataset(std::vector<double> values_)
      : values(std::move(values_)),
        sum(std::accumulate(values.begin(), values.end(), 0.0)) {}
  std::vector<double> values;
  double sum;
};

// A membership challenge: dataset d and a record z not contained in it.
// with_z() materializes the neighboring dataset d + {z}.
struct ChallengeBase {
  ChallengeBase(Dataset d_, double z_) : d(std::move(d_)), z(z_) {
    for (double v : d.values)
      if (v == z) fail(Errc::validation, "ChallengeBase: z already in dataset");
  }
  Dataset with_z() const {
    std::vector<double> vals = d.values;
    vals.push_back(z);
    return Dataset(std::move(vals));
  }
  Dataset d;
  double z;
};

// Analytic ground truth attached to a mechanism: the optimal-test trade-off
// curve beta(alpha) and the implied privacy loss at a requested delta.
struct AnalyticPrivacy {
  std::function<double(double)> beta_at_alpha;
  std::function<double(double)> eps_at_delta;
};

// The unit under audit: draw() is the only source of randomness, score() is a
// deterministic scalar statistic of the released output.
class Mechanism {
 public:
  virtual ~Mechanism() = default;
  virtual double draw(const Dataset& d, RngHandle& rng) const = 0;
  virtual double score(double z, double output) const = 0;
  virtual const AnalyticPrivacy* analytic() const { return nullptr; }
  virtual const std::string& name() const = 0;
};

}  // namespace dpaudit::testbed

#endif  // DPAUDIT_TESTBED_TYPES_HPP_
