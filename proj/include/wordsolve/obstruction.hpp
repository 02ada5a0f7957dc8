#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "wordsolve/cohomology.hpp"
#include "wordsolve/nilpotent.hpp"
#include "wordsolve/words.hpp"

namespace wordsolve {

inline void require_supported_prime(std::uint32_t p) {
  if (p != 3 && p != 5 && p != 7)
    throw UnsupportedPrimeError("p = " + std::to_string(p) +
                                " unsupported (resource guard: p in {3,5,7})");
}

/// Formal product of the invertible p-local coefficients a_i. Symbolic unless
/// explicitly pinned; obstruction verdicts never depend on pinned values.
struct UnitProduct {
  std::map<int, int> powers;  // index i -> multiplicity of a_i

  bool is_one() const { return powers.empty(); }

  UnitProduct& operator*=(const UnitProduct& other) {
    for (const auto& [i, k] : other.powers) {
      powers[i] += k;
      if (powers[i] == 0) powers.erase(i);
    }
    return *this;
  }

  std::string render() const {
    if (powers.empty()) return "1";
    std::string out;
    for (const auto& [i, k] : powers) {
      if (!out.empty()) out += '*';
      out += 'a' + std::to_string(i);
      if (k != 1) out += '^' + std::to_string(k);
    }
    return out;
  }

  bool operator==(const UnitProduct&) const = default;
};

struct CommutatorPullback {
  AlgebraElement element;  // in the PU tensor square
  UnitProduct units;
};

/// Leading term of the commutator pullback on the generator x_i:
/// a_i * (y (x) y_{i-1}). Optionally pins a_i = -(i-1) mod p for i <= p-1,
/// a cross-check mode only.
inline CommutatorPullback commutator_pullback_leading(int i, std::uint32_t p,
                                                      bool pin_unit = false) {
  if (!is_prime(p) || p < 3) throw std::invalid_argument("p must be an odd prime");
  if (i < 2 || i > static_cast<int>(p))
    throw std::invalid_argument("commutator_pullback_leading: i out of range");
  RingDescriptor sq = RingDescriptor::pu_square(p);
  Monomial m;
  m.f[0].e = 1;
  m.f[1].mask = 1u << (i - 1);
  if (pin_unit) {
    if (i == static_cast<int>(p))
      throw std::invalid_argument("the unit a_p is never pinned");
    std::uint32_t value = fp_of(-(i - 1), p);
    if (value == 0)
      throw MathPropertyError("pinned unit -(i-1) vanishes mod p");
    return {AlgebraElement::from_monomial(sq, m, value), UnitProduct{}};
  }
  UnitProduct units;
  units.powers[i] = 1;
  return {AlgebraElement::from_monomial(sq, m, 1), units};
}

/// Membership in the monomial ideal J_i, generated by
/// y^2 (x) 1, y_j (x) 1, 1 (x) y_k (k != i), 1 (x) y.
inline bool ideal_Ji_contains(const Monomial& m, int i, const RingDescriptor& ring) {
  if (!(ring == RingDescriptor::pu_square(ring.p)))
    throw std::invalid_argument("ideal_Ji_contains: PU tensor square expected");
  if (i < 1 || i > static_cast<int>(ring.p) - 1)
    throw std::invalid_argument("ideal_Ji_contains: i out of range");
  if (m.f[0].e >= 2) return true;
  if (m.f[0].mask != 0) return true;
  if (m.f[1].e >= 1) return true;
  if ((m.f[1].mask & ~(1u << i)) != 0) return true;
  return false;
}

/// Reduce modulo J_i onto the span of 1, y (x) 1, 1 (x) y_i, y (x) y_i.
inline AlgebraElement quotient_reduce(const AlgebraElement& u, int i) {
  AlgebraElement out = AlgebraElement::zero(u.ring());
  for (const auto& [m, c] : u.terms())
    if (!ideal_Ji_contains(m, i, u.ring())) out.add_term(m, c);
  return out;
}

struct WordPullbackCoefficient {
  std::uint32_t coefficient = 0;  // scalar multiplying units * (y (x) y_{i-1})
  UnitProduct units;
};

/// Pullback coefficient of x_i under the word map of
/// prod_k [x1^{n_k}, x2^{m_k}]^{l_k}, computed compositionally: power-map
/// pullbacks applied factorwise to the commutator leading term, reduced
/// modulo J_{i-1}, summed with multiplicities.
inline WordPullbackCoefficient word_pullback_coefficient(
    const std::vector<CommutatorTerm>& terms, int i, std::uint32_t p,
    bool pin_unit = false) {
  if (i < 2 || i > static_cast<int>(p))
    throw std::invalid_argument("word_pullback_coefficient: i out of range");
  for (const CommutatorTerm& t : terms)
    if (t.n == 0 || t.m == 0)
      throw std::invalid_argument("word_pullback_coefficient: zero exponent");

  CommutatorPullback lead = commutator_pullback_leading(i, p, pin_unit);
  RingDescriptor ring = RingDescriptor::pu(p);

  std::map<std::int64_t, RingHom> power_cache;
  auto power = [&](std::int64_t n) -> const RingHom& {
    auto it = power_cache.find(n);
    if (it == power_cache.end())
      it = power_cache.emplace(n, power_map_pullback(n, ring)).first;
    return it->second;
  };

  Monomial target;
  target.f[0].e = 1;
  target.f[1].mask = 1u << (i - 1);

  std::uint32_t total = 0;
  for (const CommutatorTerm& t : terms) {
    AlgebraElement e = apply_factorwise(power(t.n), power(t.m), lead.element);
    e = quotient_reduce(e, i - 1);
    for (const auto& [m, c] : e.terms())
      if (!(m == target))
        throw MathPropertyError("unexpected monomial survives the J-reduction");
    total = fp_add(total, fp_mul(fp_of(t.l, p), e.coefficient(target), p), p);
  }
  return {total, lead.units};
}

namespace detail {

inline const std::vector<MonomialFactor>& pu_factors_of_degree(std::uint32_t p, int d) {
  static std::map<std::pair<std::uint32_t, int>, std::vector<MonomialFactor>> cache;
  auto key = std::make_pair(p, d);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<MonomialFactor> out;
  for (const MonomialFactor& mf : basis_factors(RingDescriptor::pu(p)))
    if (factor_degree(mf) == d) out.push_back(mf);
  return cache.emplace(key, std::move(out)).first->second;
}

struct JSpanEnumerator {
  std::uint32_t p;
  RingDescriptor ring;
  std::pair<int, int> target;
  std::set<Monomial>* out;
  std::vector<int> rest;  // factor indices i with the J_i^{>=(2,2i-1)} choice

  void run(std::size_t idx, const Monomial& cur) {
    auto [curL, curR] = bidegree(cur);
    if (idx == rest.size()) {
      if (curL == target.first && curR == target.second) out->insert(cur);
      return;
    }
    int minRestL = 0, minRestR = 0;
    for (std::size_t k = idx + 1; k < rest.size(); ++k) {
      minRestL += 2;
      minRestR += 2 * rest[k] - 1;
    }
    int i = rest[idx];
    int slackL = target.first - curL - 2 - minRestL;
    int slackR = target.second - curR - (2 * i - 1) - minRestR;
    if (slackL < 0 || slackR < 0) return;
    for (int dL = 2; dL <= 2 + slackL; ++dL)
      for (int dR = 2 * i - 1; dR <= 2 * i - 1 + slackR; ++dR)
        for (const MonomialFactor& left : pu_factors_of_degree(p, dL))
          for (const MonomialFactor& right : pu_factors_of_degree(p, dR)) {
            Monomial m;
            m.f[0] = left;
            m.f[1] = right;
            if (!ideal_Ji_contains(m, i, ring)) continue;
            Monomial prod;
            int parity = 0;
            if (!multiply_monomials(ring, cur, m, prod, parity)) continue;
            run(idx + 1, prod);
          }
  }
};

}  // namespace detail

/// Monomials spanning the component of J in the bidegree of the top class,
/// where J = sum over proper subsets E of {1..p-1} of
/// prod_{i in E} (y (x) y_i) * prod_{i not in E} J_i^{>=(2,2i-1)}.
inline std::set<Monomial> build_J_spanning_monomials(std::uint32_t p) {
  require_supported_prime(p);
  RingDescriptor ring = RingDescriptor::pu_square(p);
  std::pair<int, int> target = {2 * static_cast<int>(p) - 2,
                                static_cast<int>((p - 1) * (p - 1))};
  std::set<Monomial> out;
  std::uint32_t full = ((1u << p) - 1u) & ~1u;  // bits 1..p-1
  for (std::uint32_t e = 0; e < (1u << (p - 1)); ++e) {
    std::uint32_t emask = e << 1;
    if (emask == full) continue;  // proper subsets only
    Monomial fixed;
    fixed.f[0].e = static_cast<std::uint32_t>(std::popcount(emask));
    fixed.f[1].mask = emask;
    detail::JSpanEnumerator enumerator{p, ring, target, &out, {}};
    for (int i = 1; i <= static_cast<int>(p) - 1; ++i)
      if (!(emask & (1u << i))) enumerator.rest.push_back(i);
    enumerator.run(0, fixed);
  }
  return out;
}

struct TopClassObstruction {
  bool in_J = false;
  AlgebraElement product_leading_term;  // +-(y^{p-1} (x) y_1...y_{p-1})
  UnitProduct units;                    // a_2 * ... * a_p
  int sign = 0;
  Monomial top_monomial;
  int degree = 0;
  std::size_t j_span_size = 0;
};

/// The mod-p obstruction for the top class: multiply the commutator-pullback
/// leading terms for i = 2..p and test the resulting monomial against the
/// span of J. A false `in_J` certifies the nonvanishing of the pullback.
inline TopClassObstruction top_class_obstruction(std::uint32_t p) {
  require_supported_prime(p);
  RingDescriptor sq = RingDescriptor::pu_square(p);

  AlgebraElement prod = AlgebraElement::unit(sq);
  UnitProduct units;
  for (int i = 2; i <= static_cast<int>(p); ++i) {
    CommutatorPullback cp = commutator_pullback_leading(i, p);
    prod = prod * cp.element;
    units *= cp.units;
  }
  if (prod.terms().size() != 1)
    throw MathPropertyError("top-class product is not a single monomial");
  const auto& [mon, coeff] = *prod.terms().begin();

  Monomial expected;
  expected.f[0].e = p - 1;
  expected.f[1].mask = ((1u << p) - 1u) & ~1u;
  if (!(mon == expected))
    throw MathPropertyError("top-class product has the wrong leading monomial");

  int sign;
  if (coeff == 1)
    sign = 1;
  else if (coeff == p - 1)
    sign = -1;
  else
    throw MathPropertyError("top-class coefficient is not a sign");

  std::set<Monomial> span = build_J_spanning_monomials(p);

  TopClassObstruction result{false, prod, units, sign, mon, total_degree(mon, sq),
                             span.size()};
  result.in_J = span.count(mon) > 0;
  return result;
}

struct HopfCheckReport {
  std::uint32_t p = 0;
  CoproductConvention convention = CoproductConvention::Adopted;
  bool coassociative = true;
  bool counit_ok = true;
  bool algebra_map_ok = true;
  bool antipode_ok = true;
  bool degenerate_all_primitive = false;
  std::vector<std::string> failures;

  bool all_axioms_pass() const {
    return coassociative && counit_ok && algebra_map_ok && antipode_ok;
  }
};

/// Verify the Hopf axioms on generators of both rings: coassociativity,
/// counit laws, multiplicativity of the coproduct on generator products, and
/// the antipode identity. Also reports whether the chosen binomial convention
/// degenerates (every exterior PU generator primitive).
inline HopfCheckReport hopf_axiom_check(std::uint32_t p,
                                        CoproductConvention conv = CoproductConvention::Adopted) {
  require_supported_prime(p);
  HopfCheckReport rep;
  rep.p = p;
  rep.convention = conv;

  for (RingDescriptor ring : {RingDescriptor::pu(p), RingDescriptor::su(p)}) {
    std::vector<int> gens;
    if (ring.has_y()) gens.push_back(0);
    for (int id : ring.odd_generator_ids()) gens.push_back(id);

    RingHom s = antipode_hom(ring, conv);
    for (int id : gens) {
      std::string name = ring.generator_name(id);
      AlgebraElement g = AlgebraElement::generator(ring, id);
      AlgebraElement d = coproduct(g, conv);
      if (!(coproduct_left(d, conv) == coproduct_right(d, conv))) {
        rep.coassociative = false;
        rep.failures.push_back("coassociativity: " + name);
      }
      if (!(counit_left(d) == g) || !(counit_right(d) == g)) {
        rep.counit_ok = false;
        rep.failures.push_back("counit: " + name);
      }
      if (!cup(apply_left(s, d)).is_zero() || !cup(apply_right(s, d)).is_zero()) {
        rep.antipode_ok = false;
        rep.failures.push_back("antipode: " + name);
      }
    }

    for (int ida : gens)
      for (int idb : gens) {
        AlgebraElement a = AlgebraElement::generator(ring, ida);
        AlgebraElement b = AlgebraElement::generator(ring, idb);
        if (!(coproduct(a * b, conv) == coproduct(a, conv) * coproduct(b, conv))) {
          rep.algebra_map_ok = false;
          rep.failures.push_back("algebra map: " + ring.generator_name(ida) + "*" +
                                 ring.generator_name(idb));
        }
      }
    if (ring.has_y()) {
      // truncation edge: Delta(y)^p must vanish with y^p
      AlgebraElement y = AlgebraElement::generator(ring, 0);
      AlgebraElement ytop = y.pow(p - 1);
      if (!(coproduct(ytop * y, conv) == coproduct(ytop, conv) * coproduct(y, conv))) {
        rep.algebra_map_ok = false;
        rep.failures.push_back("algebra map: y^" + std::to_string(p));
      }
    }
  }

  RingDescriptor pu = RingDescriptor::pu(p);
  rep.degenerate_all_primitive = true;
  for (int id : pu.odd_generator_ids()) {
    AlgebraElement g = AlgebraElement::generator(pu, id);
    AlgebraElement primitive = AlgebraElement::zero(pu.with_factors(2));
    Monomial left, right;
    left.f[0].mask = 1u << id;
    right.f[1].mask = 1u << id;
    primitive.add_term(left, 1);
    primitive.add_term(right, 1);
    if (!(coproduct(g, conv) == primitive)) {
      rep.degenerate_all_primitive = false;
      break;
    }
  }
  return rep;
}

}  // namespace wordsolve
