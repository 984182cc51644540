#pragma once

#include <cmath>
#include <cstdint>

namespace tcvol {

// ============================================================================
// Deterministic, stream-splittable random numbers for the Monte Carlo oracles.
//
// Each simulated path owns an independent generator derived from
// (seed, path index), so results are reproducible bit-for-bit regardless of
// how paths are distributed over threads.
// ============================================================================

/// SplitMix64 step; used only to expand seeds into full generator state.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace detail {

/// Inverse of the standard normal CDF, Beasley-Springer rational approximation
/// with Moro's (1995) Chebyshev-fitted tails.  Absolute error ~3e-9, ample for
/// Monte Carlo sampling.
inline double moro_inverse_normal(double u) {
  static const double a[4] = {2.50662823884, -18.61500062529, 41.39119773534,
                              -25.44106049637};
  static const double b[4] = {-8.47351093090, 23.08336743743, -21.06224101826,
                              3.13082909833};
  static const double c[9] = {0.3374754822726147, 0.9761690190917186,
                              0.1607979714918209, 0.0276438810333863,
                              0.0038405729373609, 0.0003951896511919,
                              0.0000321767881768, 0.0000002888167364,
                              0.0000003960315187};

  const double y = u - 0.5;
  if (std::abs(y) < 0.42) {
    const double r = y * y;
    return y * (((a[3] * r + a[2]) * r + a[1]) * r + a[0]) /
           ((((b[3] * r + b[2]) * r + b[1]) * r + b[0]) * r + 1.0);
  }
  double r = (y > 0.0) ? 1.0 - u : u;
  r = std::log(-std::log(r));
  double x = c[8];
  for (int i = 7; i >= 0; --i) x = x * r + c[i];
  return (y < 0.0) ? -x : x;
}

}  // namespace detail

/// xoshiro256++ by Blackman & Vigna: fast, 256-bit state, passes BigCrush.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    // Expand the seed through SplitMix64 as the authors recommend, so that
    // nearby seeds produce unrelated state.
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64_next(sm);
  }

  /// Independent generator for one logical stream (e.g. one Monte Carlo
  /// path).  The (seed, stream) pair is hashed into the 64-bit seed space
  /// before state expansion.
  static Xoshiro256pp for_stream(std::uint64_t seed, std::uint64_t stream) {
    return Xoshiro256pp(seed ^ (stream * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform draw strictly inside (0, 1): 53 random bits centered in the bin.
  double next_uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal draw via inverse-transform sampling.
  double next_normal() { return detail::moro_inverse_normal(next_uniform()); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

}  // namespace tcvol
