#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wordsolve/words.hpp"

namespace wordsolve {

/// Element of the integer Heisenberg group, stored as the entries of the
/// 3x3 upper unitriangular matrix: a top-middle, b top-right, c middle-right.
struct HeisenbergElement {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;

  bool operator==(const HeisenbergElement&) const = default;

  friend HeisenbergElement operator*(const HeisenbergElement& x,
                                     const HeisenbergElement& y) {
    return {x.a + y.a, x.b + y.b + x.a * y.c, x.c + y.c};
  }

  HeisenbergElement inverse() const { return {-a, a * c - b, -c}; }

  static HeisenbergElement identity() { return {0, 0, 0}; }
};

/// Evaluate a two-variable content in the Heisenberg group:
/// x1 -> (a=1, b=0, c=0), x2 -> (a=0, b=0, c=1).
inline HeisenbergElement heisenberg_eval(const ContentWord& c) {
  if (c.variable_count() != 2)
    throw std::invalid_argument("heisenberg_eval requires a two-variable content");
  HeisenbergElement h = HeisenbergElement::identity();
  for (const Letter& l : c.letters()) {
    HeisenbergElement g = l.index == 1 ? HeisenbergElement{l.exponent, 0, 0}
                                       : HeisenbergElement{0, 0, l.exponent};
    h = h * g;
  }
  return h;
}

inline bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/// Distinct prime factors of |v|, ascending. v = 0 has none.
inline std::vector<std::int64_t> distinct_prime_factors(std::int64_t v) {
  std::vector<std::int64_t> factors;
  if (v < 0) v = -v;
  for (std::int64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) {
      factors.push_back(d);
      while (v % d == 0) v /= d;
    }
  }
  if (v > 1) factors.push_back(v);
  return factors;
}

struct MembershipResult {
  bool in_derived = false;        // content in [F2,F2]
  bool in_gamma3 = false;         // content in [F2,[F2,F2]]
  std::optional<bool> in_modp;    // content in [F2,F2]^p . gamma_3

  bool operator==(const MembershipResult&) const = default;
};

/// Subgroup membership tests for a two-variable content; the mod-p test is
/// run only when a prime is supplied.
inline MembershipResult membership(const ContentWord& c,
                                   std::optional<std::int64_t> p = std::nullopt) {
  if (c.variable_count() != 2)
    throw std::invalid_argument("membership requires a two-variable content");
  if (p && !is_prime(*p)) throw std::invalid_argument("p is not prime");
  auto sums = exponent_sums(c);
  MembershipResult r;
  r.in_derived = sums[0] == 0 && sums[1] == 0;
  std::int64_t b = r.in_derived ? heisenberg_eval(c).b : 0;
  r.in_gamma3 = r.in_derived && b == 0;
  if (p) r.in_modp = r.in_derived && (b % *p) == 0;
  return r;
}

enum class PrimeSetKind { AllPrimes, AllPrimesNotDividing, None };

/// The set of primes for which the in-SU(p) solvability criterion applies.
struct PrimeSet {
  PrimeSetKind kind = PrimeSetKind::None;
  std::int64_t b = 0;                     // meaningful for AllPrimesNotDividing
  std::vector<std::int64_t> exceptions;   // distinct prime divisors of |b|

  bool contains(std::int64_t p) const {
    switch (kind) {
      case PrimeSetKind::AllPrimes: return true;
      case PrimeSetKind::AllPrimesNotDividing: return b % p != 0;
      case PrimeSetKind::None: return false;
    }
    return false;
  }
};

/// Decision outcome plus all intermediate invariants. Full classification is
/// available for two-variable words; other variable counts get a restricted
/// report (exponent sums and iterated-commutator recognition only).
struct ClassificationReport {
  int n = 0;
  std::string content;
  std::vector<std::int64_t> exponent_sums;
  bool restricted = false;
  std::optional<HeisenbergElement> heisenberg;
  std::optional<bool> in_derived;
  std::optional<bool> in_gamma3;
  std::optional<bool> thm11_applies;
  std::optional<PrimeSet> thm14_primes;
  std::optional<int> cn_match;
  std::vector<std::string> notes;
};

inline ClassificationReport classify(const Word& w) {
  ClassificationReport rep;
  rep.n = w.variable_count();
  ContentWord c = content(w);
  rep.content = render(c);
  rep.exponent_sums = exponent_sums(c);
  if (rep.n >= 1 && c == iterated_commutator(rep.n)) rep.cn_match = rep.n;

  if (rep.n == 2) {
    rep.restricted = false;
    HeisenbergElement h = heisenberg_eval(c);
    rep.heisenberg = h;
    bool derived = rep.exponent_sums[0] == 0 && rep.exponent_sums[1] == 0;
    bool gamma3 = derived && h.b == 0;
    rep.in_derived = derived;
    rep.in_gamma3 = gamma3;
    rep.thm11_applies = !gamma3;
    PrimeSet ps;
    if (!derived) {
      ps.kind = PrimeSetKind::AllPrimes;
    } else if (h.b != 0) {
      ps.kind = PrimeSetKind::AllPrimesNotDividing;
      ps.b = h.b;
      ps.exceptions = distinct_prime_factors(h.b);
    } else {
      ps.kind = PrimeSetKind::None;
    }
    rep.thm14_primes = ps;
    if (c.empty())
      rep.notes.push_back("singular equation: content is trivial; no criterion applies");
    else if (gamma3)
      rep.notes.push_back(
          "content lies in [F2,[F2,F2]]; the solvability criteria are silent");
  } else {
    rep.restricted = true;
    rep.notes.push_back(
        "criteria are stated for two-variable words; report restricted to "
        "exponent sums and iterated-commutator recognition");
    if (c.empty())
      rep.notes.push_back("singular equation: content is trivial; no criterion applies");
  }
  if (rep.cn_match && !c.empty())
    rep.notes.push_back("content is the iterated commutator c_" +
                        std::to_string(*rep.cn_match) +
                        "; solvable over any subgroup of SU(2)");
  return rep;
}

/// True iff the m x n integer matrix has trivial kernel as a map Z^m -> Z^n,
/// i.e. integer rank m. Fraction-free (Bareiss) elimination, exact.
inline bool howie_nonsingular(const std::vector<std::vector<std::int64_t>>& matrix) {
  const std::size_t m = matrix.size();
  if (m == 0) throw std::invalid_argument("howie_nonsingular: empty matrix");
  const std::size_t n = matrix[0].size();
  if (n == 0) throw std::invalid_argument("howie_nonsingular: empty matrix");
  for (const auto& row : matrix)
    if (row.size() != n) throw std::invalid_argument("howie_nonsingular: ragged matrix");
  if (m > n) return false;

  std::vector<std::vector<__int128>> a(m, std::vector<__int128>(n));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = matrix[i][j];

  __int128 prev = 1;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < m; ++col) {
    std::size_t pivot = rank;
    while (pivot < m && a[pivot][col] == 0) ++pivot;
    if (pivot == m) continue;
    std::swap(a[rank], a[pivot]);
    for (std::size_t i = rank + 1; i < m; ++i) {
      for (std::size_t j = col + 1; j < n; ++j)
        a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
      a[i][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank == m;
}

}  // namespace wordsolve
