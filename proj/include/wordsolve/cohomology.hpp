#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wordsolve/fp.hpp"
#include "wordsolve/words.hpp"

namespace wordsolve {

class UnsupportedPrimeError : public Error {
public:
  using Error::Error;
};

/// Signals that a mathematically guaranteed identity failed inside the
/// symbolic machinery (a convention or implementation bug, never user input).
class MathPropertyError : public Error {
public:
  using Error::Error;
};

enum class BaseShape { SU, PU };

/// Index convention of the printed coproduct sum. Adopted uses
/// binom(i-1, j-1); PrintedLiteral uses binom(j-1, i-1), which collapses the
/// sum and makes every exterior generator primitive.
enum class CoproductConvention { Adopted, PrintedLiteral };

/// One of the mod-p cohomology rings in play, or a tensor power of it.
/// SU shape: exterior generators x_2..x_p of degrees 3,5,...,2p-1.
/// PU shape: truncated polynomial generator y (degree 2, y^p = 0) and
/// exterior generators y_1..y_{p-1} of degrees 1,3,...,2p-3.
struct RingDescriptor {
  std::uint32_t p = 3;
  BaseShape base = BaseShape::PU;
  int factors = 1;

  bool operator==(const RingDescriptor&) const = default;

  static RingDescriptor su(std::uint32_t p) { return validated({p, BaseShape::SU, 1}); }
  static RingDescriptor pu(std::uint32_t p) { return validated({p, BaseShape::PU, 1}); }
  static RingDescriptor su_square(std::uint32_t p) { return validated({p, BaseShape::SU, 2}); }
  static RingDescriptor pu_square(std::uint32_t p) { return validated({p, BaseShape::PU, 2}); }

  RingDescriptor with_factors(int k) const { return validated({p, base, k}); }

  bool has_y() const { return base == BaseShape::PU; }

  /// Generator ids: PU uses 0 for y and 1..p-1 for y_i; SU uses 2..p for x_i.
  std::vector<int> odd_generator_ids() const {
    std::vector<int> ids;
    if (base == BaseShape::PU)
      for (std::uint32_t i = 1; i <= p - 1; ++i) ids.push_back(static_cast<int>(i));
    else
      for (std::uint32_t i = 2; i <= p; ++i) ids.push_back(static_cast<int>(i));
    return ids;
  }

  int generator_degree(int id) const {
    if (id == 0) {
      if (base != BaseShape::PU) throw std::invalid_argument("no y generator in SU shape");
      return 2;
    }
    return 2 * id - 1;
  }

  std::string generator_name(int id) const {
    if (id == 0) return "y";
    return (base == BaseShape::PU ? "y" : "x") + std::to_string(id);
  }

private:
  static RingDescriptor validated(RingDescriptor r) {
    if (r.p < 3 || r.p % 2 == 0) throw std::invalid_argument("p must be an odd prime");
    if (r.factors < 1 || r.factors > 3) throw std::invalid_argument("1..3 tensor factors supported");
    return r;
  }
};

/// y-exponent plus a bitmask of exterior generator indices; one per tensor
/// factor. Canonical order inside a factor: y-power first, then exterior
/// generators ascending.
struct MonomialFactor {
  std::uint32_t e = 0;
  std::uint32_t mask = 0;

  auto operator<=>(const MonomialFactor&) const = default;
};

struct Monomial {
  std::array<MonomialFactor, 3> f{};

  auto operator<=>(const Monomial&) const = default;

  static Monomial unit() { return {}; }
};

namespace detail {

inline int odd_mask_degree(std::uint32_t mask) {
  int d = 0;
  while (mask) {
    int i = std::countr_zero(mask);
    d += 2 * i - 1;
    mask &= mask - 1;
  }
  return d;
}

// #{ (a in s1, b in s2) : b < a }, the transposition parity of interleaving
// two ascending generator lists.
inline int interleave_inversions(std::uint32_t s1, std::uint32_t s2) {
  int inv = 0;
  std::uint32_t rest = s2;
  while (rest) {
    int j = std::countr_zero(rest);
    inv += std::popcount(s1 >> (j + 1));
    rest &= rest - 1;
  }
  return inv;
}

}  // namespace detail

inline int factor_degree(const MonomialFactor& mf) {
  return 2 * static_cast<int>(mf.e) + detail::odd_mask_degree(mf.mask);
}

inline int total_degree(const Monomial& m, const RingDescriptor& ring) {
  int d = 0;
  for (int k = 0; k < ring.factors; ++k) d += factor_degree(m.f[static_cast<std::size_t>(k)]);
  return d;
}

inline std::pair<int, int> bidegree(const Monomial& m) {
  return {factor_degree(m.f[0]), factor_degree(m.f[1])};
}

/// Multiply monomials with the Koszul sign against canonical order. Returns
/// false when the product vanishes (repeated exterior generator or truncation
/// y^p = 0); otherwise fills `out` and the sign parity (0 or 1).
inline bool multiply_monomials(const RingDescriptor& ring, const Monomial& m1,
                               const Monomial& m2, Monomial& out, int& parity) {
  parity = 0;
  // factor interchange: each factor of m2 crosses every later factor of m1
  for (int i = 0; i < ring.factors; ++i) {
    int di = factor_degree(m2.f[static_cast<std::size_t>(i)]) & 1;
    if (!di) continue;
    for (int j = i + 1; j < ring.factors; ++j)
      parity ^= factor_degree(m1.f[static_cast<std::size_t>(j)]) & 1;
  }
  for (int k = 0; k < ring.factors; ++k) {
    const auto& a = m1.f[static_cast<std::size_t>(k)];
    const auto& b = m2.f[static_cast<std::size_t>(k)];
    if (a.mask & b.mask) return false;
    std::uint32_t e = a.e + b.e;
    if (ring.has_y()) {
      if (e >= ring.p) return false;
    } else if (e != 0) {
      throw std::invalid_argument("y-power in SU shape");
    }
    parity ^= detail::interleave_inversions(a.mask, b.mask) & 1;
    out.f[static_cast<std::size_t>(k)] = {e, a.mask | b.mask};
  }
  return true;
}

/// Sparse F_p-linear combination of monomials; no zero coefficients stored.
class AlgebraElement {
public:
  explicit AlgebraElement(RingDescriptor ring) : ring_(ring) {}

  static AlgebraElement zero(const RingDescriptor& ring) { return AlgebraElement(ring); }

  static AlgebraElement unit(const RingDescriptor& ring) {
    return from_monomial(ring, Monomial::unit(), 1);
  }

  static AlgebraElement from_monomial(const RingDescriptor& ring, const Monomial& m,
                                      std::uint32_t coeff) {
    AlgebraElement e(ring);
    e.add_term(m, coeff);
    return e;
  }

  /// Single generator of a one-factor ring.
  static AlgebraElement generator(const RingDescriptor& ring, int id) {
    if (ring.factors != 1) throw std::invalid_argument("generator: one-factor ring expected");
    Monomial m;
    if (id == 0) {
      if (!ring.has_y()) throw std::invalid_argument("no y generator in SU shape");
      m.f[0].e = 1;
    } else {
      if (id < (ring.has_y() ? 1 : 2) ||
          id > static_cast<int>(ring.has_y() ? ring.p - 1 : ring.p))
        throw std::invalid_argument("generator index out of range");
      m.f[0].mask = 1u << id;
    }
    return from_monomial(ring, m, 1);
  }

  const RingDescriptor& ring() const { return ring_; }
  const std::map<Monomial, std::uint32_t>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  std::uint32_t coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
  }

  void add_term(const Monomial& m, std::uint32_t coeff) {
    coeff %= ring_.p;
    if (coeff == 0) return;
    auto [it, inserted] = terms_.emplace(m, coeff);
    if (!inserted) {
      it->second = fp_add(it->second, coeff, ring_.p);
      if (it->second == 0) terms_.erase(it);
    }
  }

  AlgebraElement& operator+=(const AlgebraElement& other) {
    check_ring(other);
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
  }

  AlgebraElement& operator-=(const AlgebraElement& other) {
    check_ring(other);
    for (const auto& [m, c] : other.terms_) add_term(m, fp_neg(c, ring_.p));
    return *this;
  }

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) {
    a += b;
    return a;
  }

  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) {
    a -= b;
    return a;
  }

  AlgebraElement scaled(std::uint32_t c) const {
    AlgebraElement out(ring_);
    c %= ring_.p;
    for (const auto& [m, v] : terms_) out.add_term(m, fp_mul(v, c, ring_.p));
    return out;
  }

  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    a.check_ring(b);
    AlgebraElement out(a.ring_);
    Monomial prod;
    int parity = 0;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        if (!multiply_monomials(a.ring_, ma, mb, prod, parity)) continue;
        std::uint32_t c = fp_mul(ca, cb, a.ring_.p);
        out.add_term(prod, parity ? fp_neg(c, a.ring_.p) : c);
      }
    return out;
  }

  AlgebraElement pow(std::uint32_t k) const {
    AlgebraElement out = unit(ring_);
    for (std::uint32_t j = 0; j < k; ++j) out = out * *this;
    return out;
  }

  bool operator==(const AlgebraElement&) const = default;

private:
  void check_ring(const AlgebraElement& other) const {
    if (!(ring_ == other.ring_)) throw std::invalid_argument("ring mismatch");
  }

  RingDescriptor ring_;
  std::map<Monomial, std::uint32_t> terms_;
};

/// Coefficient of the empty monomial (the augmentation).
inline std::uint32_t counit(const AlgebraElement& u) {
  return u.coefficient(Monomial::unit());
}

namespace detail {

inline std::uint32_t coproduct_binomial(int i, int j, std::uint32_t p,
                                        CoproductConvention conv) {
  return conv == CoproductConvention::Adopted ? fp_binomial(i - 1, j - 1, p)
                                              : fp_binomial(j - 1, i - 1, p);
}

}  // namespace detail

/// Coproduct of a single generator of a one-factor ring, landing in the
/// two-factor ring. SU generators are primitive; PU follows
/// Delta(y) = y(x)1 + 1(x)y and
/// Delta(y_i) = y_i(x)1 + 1(x)y_i + sum_j binom * y_j(x)y^{i-j}.
inline AlgebraElement generator_coproduct(const RingDescriptor& ring, int id,
                                          CoproductConvention conv = CoproductConvention::Adopted) {
  if (ring.factors != 1) throw std::invalid_argument("coproduct: one-factor ring expected");
  RingDescriptor sq = ring.with_factors(2);
  AlgebraElement out = AlgebraElement::zero(sq);
  Monomial left, right;
  if (id == 0) {
    if (!ring.has_y()) throw std::invalid_argument("no y generator in SU shape");
    left.f[0].e = 1;
    right.f[1].e = 1;
    out.add_term(left, 1);
    out.add_term(right, 1);
    return out;
  }
  left.f[0].mask = 1u << id;
  right.f[1].mask = 1u << id;
  out.add_term(left, 1);
  out.add_term(right, 1);
  if (ring.base == BaseShape::PU) {
    for (int j = 1; j < id; ++j) {
      std::uint32_t binom = detail::coproduct_binomial(id, j, ring.p, conv);
      if (binom == 0) continue;
      Monomial m;
      m.f[0].mask = 1u << j;
      m.f[1].e = static_cast<std::uint32_t>(id - j);
      out.add_term(m, binom);
    }
  }
  return out;
}

/// Coproduct extended multiplicatively to arbitrary elements of a one-factor
/// ring; an algebra map into the graded tensor square.
inline AlgebraElement coproduct(const AlgebraElement& u,
                                CoproductConvention conv = CoproductConvention::Adopted) {
  const RingDescriptor& ring = u.ring();
  if (ring.factors != 1) throw std::invalid_argument("coproduct: one-factor ring expected");
  RingDescriptor sq = ring.with_factors(2);

  AlgebraElement dy = AlgebraElement::zero(sq);
  if (ring.has_y()) dy = generator_coproduct(ring, 0, conv);

  AlgebraElement out = AlgebraElement::zero(sq);
  for (const auto& [m, c] : u.terms()) {
    AlgebraElement term = AlgebraElement::unit(sq).scaled(c);
    for (std::uint32_t j = 0; j < m.f[0].e; ++j) term = term * dy;
    std::uint32_t mask = m.f[0].mask;
    while (mask) {
      int id = std::countr_zero(mask);
      term = term * generator_coproduct(ring, id, conv);
      mask &= mask - 1;
    }
    out += term;
  }
  return out;
}

/// A degree-preserving algebra endomorphism of a one-factor ring, given by
/// generator images.
struct RingHom {
  RingDescriptor ring;
  std::map<int, AlgebraElement> images;

  static RingHom identity(const RingDescriptor& ring) {
    RingHom h{ring, {}};
    if (ring.has_y()) h.images.emplace(0, AlgebraElement::generator(ring, 0));
    for (int id : ring.odd_generator_ids())
      h.images.emplace(id, AlgebraElement::generator(ring, id));
    return h;
  }

  /// unit . counit: kills every positive-degree generator.
  static RingHom constant(const RingDescriptor& ring) {
    RingHom h{ring, {}};
    if (ring.has_y()) h.images.emplace(0, AlgebraElement::zero(ring));
    for (int id : ring.odd_generator_ids()) h.images.emplace(id, AlgebraElement::zero(ring));
    return h;
  }

  AlgebraElement apply(const AlgebraElement& u) const {
    if (!(u.ring() == ring)) throw std::invalid_argument("ring mismatch");
    AlgebraElement out = AlgebraElement::zero(ring);
    for (const auto& [m, c] : u.terms()) {
      AlgebraElement term = AlgebraElement::unit(ring).scaled(c);
      if (m.f[0].e > 0) {
        const AlgebraElement& ximg = images.at(0);
        for (std::uint32_t j = 0; j < m.f[0].e; ++j) term = term * ximg;
      }
      std::uint32_t mask = m.f[0].mask;
      while (mask) {
        int id = std::countr_zero(mask);
        term = term * images.at(id);
        mask &= mask - 1;
      }
      out += term;
    }
    return out;
  }

  /// this . other (apply other first).
  RingHom compose_after(const RingHom& other) const {
    RingHom h{ring, {}};
    for (const auto& [id, img] : other.images) h.images.emplace(id, apply(img));
    return h;
  }
};

/// Antipode on generators: S(y) = -y, S(x_i) = -x_i, and for PU exterior
/// generators the recursion forced by m(S (x) id)Delta = unit . counit.
inline RingHom antipode_hom(const RingDescriptor& ring,
                            CoproductConvention conv = CoproductConvention::Adopted) {
  RingHom h{ring, {}};
  std::uint32_t p = ring.p;
  if (ring.has_y())
    h.images.emplace(0, AlgebraElement::generator(ring, 0).scaled(p - 1));
  for (int id : ring.odd_generator_ids()) {
    AlgebraElement img = AlgebraElement::generator(ring, id).scaled(p - 1);
    if (ring.base == BaseShape::PU) {
      for (int j = 1; j < id; ++j) {
        std::uint32_t binom = detail::coproduct_binomial(id, j, p, conv);
        if (binom == 0) continue;
        Monomial ypow;
        ypow.f[0].e = static_cast<std::uint32_t>(id - j);
        AlgebraElement tail =
            h.images.at(j) * AlgebraElement::from_monomial(ring, ypow, binom);
        img -= tail;
      }
    }
    h.images.emplace(id, img);
  }
  return h;
}

inline AlgebraElement antipode(const AlgebraElement& u,
                               CoproductConvention conv = CoproductConvention::Adopted) {
  return antipode_hom(u.ring(), conv).apply(u);
}

// ---- tensor-factor plumbing ------------------------------------------------

namespace detail {

inline Monomial as_single(const MonomialFactor& mf) {
  Monomial m;
  m.f[0] = mf;
  return m;
}

}  // namespace detail

/// cup product m: two-factor elements to the one-factor ring.
inline AlgebraElement cup(const AlgebraElement& u) {
  RingDescriptor sq = u.ring();
  if (sq.factors != 2) throw std::invalid_argument("cup: two-factor ring expected");
  RingDescriptor ring = sq.with_factors(1);
  AlgebraElement out = AlgebraElement::zero(ring);
  for (const auto& [m, c] : u.terms()) {
    AlgebraElement prod =
        AlgebraElement::from_monomial(ring, detail::as_single(m.f[0]), c) *
        AlgebraElement::from_monomial(ring, detail::as_single(m.f[1]), 1);
    out += prod;
  }
  return out;
}

/// f (x) id and id (x) f on two-factor elements (f degree-preserving, so no
/// Koszul signs appear).
inline AlgebraElement apply_left(const RingHom& f, const AlgebraElement& u) {
  RingDescriptor sq = u.ring();
  if (sq.factors != 2) throw std::invalid_argument("apply_left: two-factor ring expected");
  AlgebraElement out = AlgebraElement::zero(sq);
  for (const auto& [m, c] : u.terms()) {
    AlgebraElement img = f.apply(
        AlgebraElement::from_monomial(sq.with_factors(1), detail::as_single(m.f[0]), 1));
    for (const auto& [mi, ci] : img.terms()) {
      Monomial result;
      result.f[0] = mi.f[0];
      result.f[1] = m.f[1];
      out.add_term(result, fp_mul(c, ci, sq.p));
    }
  }
  return out;
}

inline AlgebraElement apply_right(const RingHom& f, const AlgebraElement& u) {
  RingDescriptor sq = u.ring();
  if (sq.factors != 2) throw std::invalid_argument("apply_right: two-factor ring expected");
  AlgebraElement out = AlgebraElement::zero(sq);
  for (const auto& [m, c] : u.terms()) {
    AlgebraElement img = f.apply(
        AlgebraElement::from_monomial(sq.with_factors(1), detail::as_single(m.f[1]), 1));
    for (const auto& [mi, ci] : img.terms()) {
      Monomial result;
      result.f[0] = m.f[0];
      result.f[1] = mi.f[0];
      out.add_term(result, fp_mul(c, ci, sq.p));
    }
  }
  return out;
}

inline AlgebraElement apply_factorwise(const RingHom& fl, const RingHom& fr,
                                       const AlgebraElement& u) {
  return apply_left(fl, apply_right(fr, u));
}

/// Delta (x) id and id (x) Delta: two-factor elements into the tensor cube.
inline AlgebraElement coproduct_left(const AlgebraElement& u,
                                     CoproductConvention conv = CoproductConvention::Adopted) {
  RingDescriptor sq = u.ring();
  if (sq.factors != 2) throw std::invalid_argument("coproduct_left: two-factor ring expected");
  RingDescriptor cube = sq.with_factors(3);
  AlgebraElement out = AlgebraElement::zero(cube);
  for (const auto& [m, c] : u.terms()) {
    AlgebraElement d = coproduct(
        AlgebraElement::from_monomial(sq.with_factors(1), detail::as_single(m.f[0]), 1), conv);
    for (const auto& [md, cd] : d.terms()) {
      Monomial result;
      result.f[0] = md.f[0];
      result.f[1] = md.f[1];
      result.f[2] = m.f[1];
      out.add_term(result, fp_mul(c, cd, sq.p));
    }
  }
  return out;
}

inline AlgebraElement coproduct_right(const AlgebraElement& u,
                                      CoproductConvention conv = CoproductConvention::Adopted) {
  RingDescriptor sq = u.ring();
  if (sq.factors != 2) throw std::invalid_argument("coproduct_right: two-factor ring expected");
  RingDescriptor cube = sq.with_factors(3);
  AlgebraElement out = AlgebraElement::zero(cube);
  for (const auto& [m, c] : u.terms()) {
    AlgebraElement d = coproduct(
        AlgebraElement::from_monomial(sq.with_factors(1), detail::as_single(m.f[1]), 1), conv);
    for (const auto& [md, cd] : d.terms()) {
      Monomial result;
      result.f[0] = m.f[0];
      result.f[1] = md.f[0];
      result.f[2] = md.f[1];
      out.add_term(result, fp_mul(c, cd, sq.p));
    }
  }
  return out;
}

/// epsilon (x) id and id (x) epsilon, collapsing to the one-factor ring.
inline AlgebraElement counit_left(const AlgebraElement& u) {
  RingDescriptor sq = u.ring();
  if (sq.factors != 2) throw std::invalid_argument("counit_left: two-factor ring expected");
  AlgebraElement out = AlgebraElement::zero(sq.with_factors(1));
  for (const auto& [m, c] : u.terms())
    if (m.f[0] == MonomialFactor{}) out.add_term(detail::as_single(m.f[1]), c);
  return out;
}

inline AlgebraElement counit_right(const AlgebraElement& u) {
  RingDescriptor sq = u.ring();
  if (sq.factors != 2) throw std::invalid_argument("counit_right: two-factor ring expected");
  AlgebraElement out = AlgebraElement::zero(sq.with_factors(1));
  for (const auto& [m, c] : u.terms())
    if (m.f[1] == MonomialFactor{}) out.add_term(detail::as_single(m.f[0]), c);
  return out;
}

// ---- power maps -------------------------------------------------------------

/// Convolution f * g = cup . (f (x) g) . Delta evaluated on one element.
inline AlgebraElement convolve_apply(const RingHom& f, const RingHom& g,
                                     const AlgebraElement& u,
                                     CoproductConvention conv = CoproductConvention::Adopted) {
  return cup(apply_factorwise(f, g, coproduct(u, conv)));
}

inline RingHom convolve(const RingHom& f, const RingHom& g,
                        CoproductConvention conv = CoproductConvention::Adopted) {
  RingHom h{f.ring, {}};
  auto add_image = [&](int id) {
    h.images.emplace(
        id, convolve_apply(f, g, AlgebraElement::generator(f.ring, id), conv));
  };
  if (f.ring.has_y()) add_image(0);
  for (int id : f.ring.odd_generator_ids()) add_image(id);
  return h;
}

/// Pullback of the power map u -> u^n as a ring endomorphism, computed as the
/// n-fold convolution of the identity; n = 0 is unit . counit and negative n
/// composes with the antipode.
inline RingHom power_map_pullback(std::int64_t n, const RingDescriptor& ring,
                                  CoproductConvention conv = CoproductConvention::Adopted) {
  if (ring.factors != 1)
    throw std::invalid_argument("power_map_pullback: one-factor ring expected");
  if (n < 0) return antipode_hom(ring, conv).compose_after(power_map_pullback(-n, ring, conv));
  RingHom h = RingHom::constant(ring);
  RingHom id = RingHom::identity(ring);
  for (std::int64_t k = 0; k < n; ++k) h = convolve(h, id, conv);
  return h;
}

// ---- bases and rendering ----------------------------------------------------

/// All monomial factors of the base (one-factor) ring, in canonical order.
inline std::vector<MonomialFactor> basis_factors(const RingDescriptor& ring) {
  std::vector<MonomialFactor> out;
  std::uint32_t emax = ring.has_y() ? ring.p - 1 : 0;
  std::uint32_t low = ring.has_y() ? 1 : 2;
  std::uint32_t high = ring.has_y() ? ring.p - 1 : ring.p;
  std::uint32_t nbits = high - low + 1;
  for (std::uint32_t e = 0; e <= emax; ++e)
    for (std::uint32_t s = 0; s < (1u << nbits); ++s) {
      std::uint32_t mask = 0;
      for (std::uint32_t b = 0; b < nbits; ++b)
        if (s & (1u << b)) mask |= 1u << (low + b);
      out.push_back({e, mask});
    }
  return out;
}

inline std::vector<Monomial> basis(const RingDescriptor& ring) {
  std::vector<MonomialFactor> fs = basis_factors(ring.with_factors(1));
  std::vector<Monomial> out;
  if (ring.factors == 1) {
    for (const auto& a : fs) out.push_back(detail::as_single(a));
  } else if (ring.factors == 2) {
    for (const auto& a : fs)
      for (const auto& b : fs) {
        Monomial m;
        m.f[0] = a;
        m.f[1] = b;
        out.push_back(m);
      }
  } else {
    for (const auto& a : fs)
      for (const auto& b : fs)
        for (const auto& c : fs) {
          Monomial m;
          m.f[0] = a;
          m.f[1] = b;
          m.f[2] = c;
          out.push_back(m);
        }
  }
  return out;
}

namespace detail {

inline std::string render_factor(const RingDescriptor& ring, const MonomialFactor& mf) {
  std::string out = ring.has_y() ? "y^" + std::to_string(mf.e) : "x";
  out += ".{";
  bool first = true;
  std::uint32_t mask = mf.mask;
  while (mask) {
    int i = std::countr_zero(mask);
    if (!first) out += ',';
    out += std::to_string(i);
    first = false;
    mask &= mask - 1;
  }
  out += '}';
  return out;
}

inline std::string pretty_factor(const RingDescriptor& ring, const MonomialFactor& mf) {
  std::string out;
  if (ring.has_y() && mf.e > 0) {
    out += 'y';
    if (mf.e > 1) out += '^' + std::to_string(mf.e);
  }
  std::uint32_t mask = mf.mask;
  while (mask) {
    int i = std::countr_zero(mask);
    out += ring.has_y() ? 'y' : 'x';
    out += std::to_string(i);
    mask &= mask - 1;
  }
  return out.empty() ? "1" : out;
}

}  // namespace detail

/// Canonical rendering, e.g. `2*y^1.{1,2}|y^0.{}`.
inline std::string render_monomial(const RingDescriptor& ring, const Monomial& m) {
  std::string out;
  for (int k = 0; k < ring.factors; ++k) {
    if (k) out += '|';
    out += detail::render_factor(ring, m.f[static_cast<std::size_t>(k)]);
  }
  return out;
}

inline std::string render(const AlgebraElement& u) {
  if (u.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : u.terms()) {
    if (!out.empty()) out += " + ";
    out += std::to_string(c) + "*" + render_monomial(u.ring(), m);
  }
  return out;
}

/// Human-facing rendering, e.g. `y^2(x)y1y2` rendered with a tensor glyph.
inline std::string pretty_monomial(const RingDescriptor& ring, const Monomial& m) {
  std::string out;
  for (int k = 0; k < ring.factors; ++k) {
    if (k) out += "⊗";
    out += detail::pretty_factor(ring, m.f[static_cast<std::size_t>(k)]);
  }
  return out;
}

}  // namespace wordsolve
