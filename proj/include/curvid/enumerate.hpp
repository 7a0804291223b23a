#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "curvid/errors.hpp"
#include "curvid/evaluate.hpp"
#include "curvid/monomial.hpp"
#include "curvid/polynomial.hpp"
#include "curvid/rational.hpp"

namespace curvid {

/// Distinct canonical contraction monomials of one weight and valence.
struct SpanningSet {
  int weight = 0;
  Valence valence = Valence::scalar;
  int max_factors = 3;
  int max_deriv = 2;
  std::vector<Monomial> elements;  // canonical keys, ascending, unless built from_monomials

  std::size_t size() const { return elements.size(); }

  InvariantPolynomial element(std::size_t i) const { return InvariantPolynomial::from_monomial(elements.at(i)); }

  /// Builds a set from explicit monomials, kept verbatim and in the given
  /// order (so signs and labels are the caller's). Throws if two collapse to
  /// the same canonical key or one vanishes by symmetry.
  static SpanningSet from_monomials(const std::vector<Monomial>& ms) {
    if (ms.empty()) throw StructuralError("spanning set needs at least one element");
    SpanningSet s;
    s.weight = ms.front().weight();
    s.valence = ms.front().valence();
    std::set<Monomial> seen;
    for (const auto& m : ms) {
      auto [key, sign] = canonicalize(m);
      if (sign == 0) throw StructuralError(to_string(m) + " vanishes by slot symmetry");
      if (key.weight() != s.weight || key.valence() != s.valence)
        throw StructuralError("spanning set elements must share weight and valence");
      if (!seen.insert(key).second) throw StructuralError("duplicate spanning element " + to_string(m));
      s.elements.push_back(m);
      s.max_deriv = std::max(s.max_deriv, key.max_derivs());
    }
    s.max_factors = 0;
    for (const auto& m : s.elements) s.max_factors = std::max(s.max_factors, m.curvature_factor_count());
    return s;
  }
};

namespace detail {

// Derivative-count multisets {k_1 >= k_2 >= ...} with sum (2 + k_a) = n.
inline void derivative_profiles(int n, int max_factors, int max_deriv, int upper, std::vector<int>& cur,
                                std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  if (static_cast<int>(cur.size()) == max_factors) return;
  for (int k = std::min(upper, max_deriv); k >= 0; --k) {
    if (2 + k > n) continue;
    cur.push_back(k);
    derivative_profiles(n - 2 - k, max_factors, max_deriv, k, cur, out);
    cur.pop_back();
  }
}

// Every perfect matching of `slots` slots, reported as a label per slot.
template <class Visit>
void for_each_matching(int slots, const std::vector<int>& slot_order, Visit&& visit) {
  std::vector<int> label(static_cast<std::size_t>(slots), -1);
  auto rec = [&](auto&& self, int next_label) -> void {
    int first = -1;
    for (int s : slot_order)
      if (label[static_cast<std::size_t>(s)] < 0) {
        first = s;
        break;
      }
    if (first < 0) {
      visit(label);
      return;
    }
    label[static_cast<std::size_t>(first)] = next_label;
    for (int s : slot_order) {
      if (label[static_cast<std::size_t>(s)] >= 0) continue;
      label[static_cast<std::size_t>(s)] = next_label;
      self(self, next_label + 1);
      label[static_cast<std::size_t>(s)] = -1;
    }
    label[static_cast<std::size_t>(first)] = -1;
  };
  rec(rec, 0);
}

}  // namespace detail

/// All canonical pair contractions of weight n built from at most
/// `max_factors` curvature factors, each with at most `max_deriv` covariant
/// derivatives. No dimension-specific relation is applied; monomials that
/// vanish by the slot symmetries are dropped.
///
/// A nonzero shuffle_seed permutes the internal enumeration order; the
/// result does not depend on it.
inline SpanningSet enumerate_spanning_set(int n, Valence valence, int max_deriv = 2, int max_factors = 3,
                                          std::uint64_t shuffle_seed = 0) {
  if (n < 0 || n % 2 != 0) throw CapabilityError("spanning sets exist only for even non-negative weight");
  if (n > 6) throw CapabilityError("spanning sets are supported up to weight 6");
  if (max_deriv > 2) throw CapabilityError("derivative order above 2 is not supported");

  std::vector<std::vector<int>> profiles;
  std::vector<int> cur;
  detail::derivative_profiles(n, max_factors, max_deriv, max_deriv, cur, profiles);

  Rng rng(shuffle_seed);
  if (shuffle_seed != 0) std::shuffle(profiles.begin(), profiles.end(), rng);

  std::set<Monomial> keys;
  for (auto profile : profiles) {
    if (shuffle_seed != 0) std::shuffle(profile.begin(), profile.end(), rng);
    std::vector<Factor> shape;
    for (int k : profile) shape.push_back(Factor{k, std::vector<int>(4 + static_cast<std::size_t>(k), 0)});
    if (valence == Valence::sym2) shape.push_back(Factor::free_pair(0, 0));
    int slots = 0;
    for (const auto& f : shape) slots += static_cast<int>(f.slot_count());
    std::vector<int> order(static_cast<std::size_t>(slots));
    std::iota(order.begin(), order.end(), 0);
    if (shuffle_seed != 0) std::shuffle(order.begin(), order.end(), rng);

    detail::for_each_matching(slots, order, [&](const std::vector<int>& label) {
      Monomial m;
      std::size_t s = 0;
      for (const auto& f : shape) {
        Factor g = f;
        for (auto& l : g.labels) l = label[s++];
        m.factors.push_back(std::move(g));
      }
      auto [key, sign] = canonicalize(m);
      if (sign != 0) keys.insert(std::move(key));
    });
  }

  SpanningSet out;
  out.weight = n;
  out.valence = valence;
  out.max_factors = max_factors;
  out.max_deriv = max_deriv;
  out.elements.assign(keys.begin(), keys.end());
  return out;
}

/// Only the elements without covariant derivatives.
inline SpanningSet curvature_only(const SpanningSet& s) {
  SpanningSet out = s;
  out.max_deriv = 0;
  out.elements.clear();
  for (const auto& m : s.elements)
    if (m.max_derivs() == 0) out.elements.push_back(m);
  return out;
}

namespace detail {

// Monomial R_{i1 i2 j2 j1} ... with i_a = a and j_{sigma(a)} = a, followed by
// the free pair (i_p, j_p) when with_free_pair is set.
inline Monomial wedge_monomial(const SignedPermutation& s, int n, bool with_free_pair) {
  const int p = static_cast<int>(s.image.size());
  std::vector<int> j(static_cast<std::size_t>(p));
  for (int a = 0; a < p; ++a) j[static_cast<std::size_t>(s.image[static_cast<std::size_t>(a)])] = a;
  Monomial m;
  for (int f = 0; f < n; f += 2) {
    const auto a = static_cast<std::size_t>(f);
    m.factors.push_back(Factor::curvature({f, f + 1, j[a + 1], j[a]}));
  }
  if (with_free_pair) m.factors.push_back(Factor::free_pair(p - 1, j[static_cast<std::size_t>(p - 1)]));
  return m;
}

}  // namespace detail

/// E_{m,n} as a dimension-generic combination of canonical monomials:
/// the generalized Kronecker delta is expanded as a signed permutation sum
/// and each term canonicalized.
inline InvariantPolynomial pfaffian_expand(int n) {
  if (n < 0 || n % 2 != 0 || n > 6) throw CapabilityError("Pfaffian expansion supports n in {0, 2, 4, 6}");
  InvariantPolynomial out(Valence::scalar, n);
  for (const auto& s : signed_permutations(n)) out.add_term(detail::wedge_monomial(s, n, false), s.sign);
  return out;
}

/// T^2_{m,n} as a dimension-generic 2-form valued combination, expanded
/// from n + 1 wedge factors with the last pair feeding the free slots.
inline InvariantPolynomial t2_expand(int n) {
  if (n < 0 || n % 2 != 0 || n > 6) throw CapabilityError("T2 expansion supports n in {0, 2, 4, 6}");
  InvariantPolynomial out(Valence::sym2, n);
  for (const auto& s : signed_permutations(n + 1)) out.add_term(detail::wedge_monomial(s, n, true), s.sign);
  return out;
}

}  // namespace curvid
