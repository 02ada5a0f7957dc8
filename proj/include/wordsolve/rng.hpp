#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace wordsolve {

/// SplitMix64: 64-bit splittable generator. Substreams are formed by seed
/// arithmetic (e.g. seed + restart index), matching the reproducibility
/// contract of the solver.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Standard complex Gaussian entry via Box-Muller; consumes exactly two
  /// uniforms, so the sampling order is fully pinned down.
  std::complex<double> next_complex_gaussian() {
    double u1 = 1.0 - next_double();  // (0, 1]
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * M_PI * u2;
    return {r * std::cos(t), r * std::sin(t)};
  }

private:
  std::uint64_t state_;
};

/// Mix a salt into a base seed to derive independent named substreams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  SplitMix64 rng(base ^ (salt * 0x9E3779B97F4A7C15ull));
  return rng.next();
}

}  // namespace wordsolve
