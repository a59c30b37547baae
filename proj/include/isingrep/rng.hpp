#pragma once

#include <cstdint>
#include <random>

namespace isingrep {

/// SplitMix64 finalizer; used to derive independent seeds from (seed, index).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// A random stream backed by mt19937_64.
///
/// Streams are addressed by (master seed, index) so that the i-th sample of an
/// experiment sees the same randomness regardless of how work is split across
/// threads. Uniform doubles are built from the top 53 bits directly, so the
/// output does not depend on the standard library's distribution classes.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  RngStream(std::uint64_t master_seed, std::uint64_t index)
      : engine_(derive(master_seed, index)) {}

  static std::uint64_t derive(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bit() {
    if (bits_left_ == 0) {
      bit_cache_ = engine_();
      bits_left_ = 64;
    }
    bool b = (bit_cache_ & 1U) != 0;
    bit_cache_ >>= 1;
    --bits_left_;
    return b;
  }

  /// True with probability q. q <= 0 never fires and q >= 1 always fires.
  bool bernoulli(double q) {
    if (q <= 0.0) return false;
    if (q >= 1.0) return true;
    return uniform() < q;
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_); }

  using result_type = std::uint64_t;
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::uint64_t bit_cache_ = 0;
  int bits_left_ = 0;
};

}  // namespace isingrep
