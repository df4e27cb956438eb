#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dpaudit/rng.hpp"

using dpaudit::RngHandle;

TEST_CASE("identical (seed, stream) replays the exact sequence") {
  RngHandle a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct streams and seeds diverge") {
  RngHandle a(42, 0), b(42, 1), c(43, 0);
  int equal_ab = 0, equal_ac = 0;
  for (int i = 0; i < 256; ++i) {
    const auto x = a.next_u64();
    equal_ab += x == b.next_u64();
    equal_ac += x == c.next_u64();
  }
  CHECK(equal_ab == 0);
  CHECK(equal_ac == 0);
}

TEST_CASE("single counter/key bit flips scramble roughly half the output bits") {
  // Avalanche check on the first block of a few neighboring streams/seeds.
  auto first_pair = [](std::uint64_t seed, std::uint64_t stream) {
    RngHandle r(seed, stream);
    const std::uint64_t lo = r.next_u64();
    const std::uint64_t hi = r.next_u64();
    return std::pair{lo, hi};
  };
  int total_bits = 0;
  for (std::uint64_t bit = 0; bit < 64; ++bit) {
    const auto base = first_pair(99, 0);
    const auto flip = first_pair(99, std::uint64_t(1) << bit);
    total_bits += std::popcount(base.first ^ flip.first);
    total_bits += std::popcount(base.second ^ flip.second);
  }
  const double mean_flipped = total_bits / (64.0 * 128.0);  // fraction of 128 bits
  CHECK(mean_flipped > 0.45);
  CHECK(mean_flipped < 0.55);
}

TEST_CASE("uniform draws look uniform and stay strictly inside (0,1)") {
  RngHandle r(5, 5);
  const int n = 100'000;
  double sum = 0.0, sumsq = 0.0;
  double mn = 1.0, mx = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    sum += u;
    sumsq += u * u;
    mn = std::min(mn, u);
    mx = std::max(mx, u);
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
  CHECK(mn < 1e-3);
  CHECK(mx > 1.0 - 1e-3);
}

TEST_CASE("streams are pairwise uncorrelated") {
  RngHandle a(11, 0), b(11, 1);
  const int n = 50'000;
  double sab = 0.0, sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = a.uniform(), y = b.uniform();
    sa += x;
    sb += y;
    sab += x * y;
    saa += x * x;
    sbb += y * y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  const double corr =
      cov / std::sqrt((saa / n - (sa / n) * (sa / n)) * (sbb / n - (sb / n) * (sb / n)));
  CHECK(std::abs(corr) < 0.02);
}
