#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace osn {

/// Seedable, splittable 64-bit PRNG used by every stochastic operation.
///
/// The generator is sfc64 (chaotic small-fast-counter generator, passes
/// PractRand), seeded through a splitmix64 expansion so that nearby seeds
/// give unrelated state. `stream(i)` derives an independent generator for
/// chain i from the same master seed; the distributions below are written
/// out explicitly so runs are bit-reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t s = seed;
    a_ = splitmix64(s);
    b_ = splitmix64(s);
    c_ = splitmix64(s);
    counter_ = 1;
    for (int i = 0; i < 12; ++i) next_u64();
  }

  /// Independent generator for stream `stream_id` of this master seed.
  Rng stream(std::uint64_t stream_id) const {
    std::uint64_t s = seed_ ^ (0x9E3779B97F4A7C15ULL * (stream_id + 1));
    return Rng(splitmix64(s));
  }

  std::uint64_t master_seed() const { return seed_; }

  std::uint64_t next_u64() {
    const std::uint64_t tmp = a_ + b_ + counter_++;
    a_ = b_ ^ (b_ >> 11);
    b_ = c_ + (c_ << 3);
    c_ = ((c_ << 24) | (c_ >> 40)) + tmp;
    return tmp;
  }

  /// Uniform index in [0, n). Lemire's bounded method, no modulo bias.
  std::size_t index(std::size_t n) {
    using u128 = unsigned __int128;
    u128 m = static_cast<u128>(next_u64()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t threshold = (0 - static_cast<std::uint64_t>(n)) % n;
      while (lo < threshold) {
        m = static_cast<u128>(next_u64()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::size_t>(m >> 64);
  }

  /// Uniform double in [0, 1).
  double real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return real() < p; }

  /// Standard normal via Box-Muller (second deviate cached).
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = real();
    while (u1 <= 0.0) u1 = real();
    const double u2 = real();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t a_, b_, c_, counter_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace osn
