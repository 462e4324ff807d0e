#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace liegeom {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Value-type sampler state. Identical (seed, counter) pairs reproduce the
/// same draws; sampling operations return an advanced copy instead of
/// mutating, so disjoint counters give independent streams.
struct SeededSampler {
  std::uint64_t seed = 0;
  std::uint64_t counter = 0;

  SeededSampler advanced() const { return {seed, counter + 1}; }
};

/// One concrete random stream derived from a (seed, counter) pair.
class RngStream {
 public:
  explicit RngStream(const SeededSampler& s)
      : eng_(splitmix64(s.seed ^ splitmix64(~s.counter))) {}

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (keeps the paired draw for the next call).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::complex<double> gaussian_complex() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace liegeom
