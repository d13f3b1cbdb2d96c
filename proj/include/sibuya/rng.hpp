#ifndef SIBUYA_RNG_HPP
#define SIBUYA_RNG_HPP

#include <array>
#include <cstdint>
#include <limits>

namespace sibuya {

/// Philox4x32-10 counter-based generator. A stream is fully determined by
/// (seed, stream id); the block counter advances inside the stream. Two
/// generators with the same (seed, stream) produce identical sequences on every
/// platform, so Monte-Carlo results are reproducible per replica.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (lane_ == 2) {
      block_ = round10(counter_++);
      lane_ = 0;
    }
    const result_type out = (static_cast<result_type>(block_[2 * lane_]) << 32) |
                            block_[2 * lane_ + 1];
    ++lane_;
    return out;
  }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t stream() const noexcept { return stream_; }

 private:
  using Block = std::array<std::uint32_t, 4>;

  static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                      std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
  }

  Block round10(std::uint64_t counter) const noexcept {
    Block x{static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32),
            static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    std::array<std::uint32_t, 2> k = key_;
    for (int r = 0; r < 10; ++r) {
      std::uint32_t hi0, lo0, hi1, lo1;
      mulhilo(0xD2511F53u, x[0], hi0, lo0);
      mulhilo(0xCD9E8D57u, x[2], hi1, lo1);
      x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
      k[0] += 0x9E3779B9u;
      k[1] += 0xBB67AE85u;
    }
    return x;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  Block block_{};
  int lane_ = 2;
};

}  // namespace sibuya

#endif  // SIBUYA_RNG_HPP
