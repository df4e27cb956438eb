#ifndef DPAUDIT_RNG_HPP_
#define DPAUDIT_RNG_HPP_

#include <array>
#include <cstdint>

namespace dpaudit {

// Counter-based generator (Philox4x32-10). A (seed, stream) pair addresses a
// dedicated 2^66-byte random stream: the seed is the cipher key, the stream id
// occupies the upper counter words, and the draw index the lower ones. Equal
// (seed, stream) pairs replay the exact same sequence; distinct stream ids are
// statistically independent, which is what multi-chain runs and parallel
// measurement fan-outs rely on.
class RngHandle {
 public:
  RngHandle(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream),
        seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  std::uint64_t next_u64() noexcept {
    if (avail_ == 0) refill();
    return out_[--avail_];
  }

  // Strictly inside (0,1): (k + 1/2) * 2^-53 with k drawn from 53 bits.
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

 private:
  static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                      std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
  }

  void refill() noexcept {
    std::uint32_t x0 = static_cast<std::uint32_t>(block_);
    std::uint32_t x1 = static_cast<std::uint32_t>(block_ >> 32);
    std::uint32_t x2 = static_cast<std::uint32_t>(stream_);
    std::uint32_t x3 = static_cast<std::uint32_t>(stream_ >> 32);
    std::uint32_t k0 = key_[0];
    std::uint32_t k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
      std::uint32_t hi0, lo0, hi1, lo1;
      mulhilo(0xD2511F53u, x0, hi0, lo0);
      mulhilo(0xCD9E8D57u, x2, hi1, lo1);
      x0 = hi1 ^ x1 ^ k0;
      x1 = lo1;
      x2 = hi0 ^ x3 ^ k1;
      x3 = lo0;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    out_[0] = (static_cast<std::uint64_t>(x1) << 32) | x0;
    out_[1] = (static_cast<std::uint64_t>(x3) << 32) | x2;
    avail_ = 2;
    ++block_;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t seed_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> out_{};
  int avail_ = 0;
};

}  // namespace dpaudit

#endif  // DPAUDIT_RNG_HPP_
