#pragma once

#include <cstdint>
#include <stdexcept>

namespace wordsolve {

// Arithmetic in F_p for small p. Values are kept in [0, p).

inline std::uint32_t fp_of(std::int64_t v, std::uint32_t p) {
  std::int64_t r = v % static_cast<std::int64_t>(p);
  if (r < 0) r += p;
  return static_cast<std::uint32_t>(r);
}

inline std::uint32_t fp_add(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  std::uint32_t s = a + b;
  return s >= p ? s - p : s;
}

inline std::uint32_t fp_neg(std::uint32_t a, std::uint32_t p) {
  return a == 0 ? 0 : p - a;
}

inline std::uint32_t fp_sub(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return fp_add(a, fp_neg(b, p), p);
}

inline std::uint32_t fp_mul(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % p);
}

/// Binomial coefficient mod p via the multiplicative formula, kept exact in
/// 64 bits before reduction. Arguments stay small (n < p) in every use here.
inline std::uint32_t fp_binomial(std::int64_t n, std::int64_t k, std::uint32_t p) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (n > 62) throw std::invalid_argument("fp_binomial: n too large");
  std::uint64_t num = 1, den = 1;
  for (std::int64_t j = 1; j <= k; ++j) {
    num *= static_cast<std::uint64_t>(n - k + j);
    den *= static_cast<std::uint64_t>(j);
    std::uint64_t g = [](std::uint64_t a, std::uint64_t b) {
      while (b) { auto t = a % b; a = b; b = t; }
      return a;
    }(num, den);
    num /= g;
    den /= g;
  }
  return static_cast<std::uint32_t>((num / den) % p);
}

}  // namespace wordsolve
