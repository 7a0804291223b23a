#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

#include "curvid/curvature.hpp"
#include "curvid/errors.hpp"
#include "curvid/monomial.hpp"
#include "curvid/polynomial.hpp"

namespace curvid {

/// Dense symmetric m x m matrix of the components Q_ij of Q_ij e^i o e^j.
template <class T>
struct SymMatrix {
  int dim = 0;
  std::vector<T> v;

  SymMatrix() = default;
  explicit SymMatrix(int m) : dim(m), v(static_cast<std::size_t>(m * m), T(0)) {}

  T& operator()(int i, int j) { return v[static_cast<std::size_t>(i * dim + j)]; }
  const T& operator()(int i, int j) const { return v[static_cast<std::size_t>(i * dim + j)]; }

  bool is_zero() const {
    return std::all_of(v.begin(), v.end(), [](const T& x) { return x == T(0); });
  }
  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;
};

/// A permutation of 0..p-1 together with its sign.
struct SignedPermutation {
  std::vector<int> image;
  int sign;
};

/// All p! permutations in lexicographic order with signs.
inline const std::vector<SignedPermutation>& signed_permutations(int p) {
  static std::vector<std::vector<SignedPermutation>> cache;
  if (p < 0 || p > 8) throw CapabilityError("permutation tables are limited to p <= 8");
  if (cache.size() <= static_cast<std::size_t>(p)) cache.resize(static_cast<std::size_t>(p) + 1);
  auto& out = cache[static_cast<std::size_t>(p)];
  if (!out.empty()) return out;
  std::vector<int> perm(static_cast<std::size_t>(p));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    int inversions = 0;
    for (int a = 0; a < p; ++a)
      for (int b = a + 1; b < p; ++b) inversions += perm[static_cast<std::size_t>(a)] > perm[static_cast<std::size_t>(b)];
    out.push_back({perm, inversions % 2 == 0 ? +1 : -1});
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

namespace detail {

// Depth-first summation over index assignments of a contraction monomial.
// Labels are visited so that free-pair labels come first; each factor is
// multiplied in as soon as its last label is fixed, and zero partial
// products prune the subtree.
template <class T>
class ContractionSum {
 public:
  ContractionSum(const Monomial& m, const CurvatureData<T>& c) : mono_(m), c_(c) {
    std::vector<int> order;
    auto visit = [&](const Factor& f) {
      for (int l : f.labels)
        if (std::find(order.begin(), order.end(), l) == order.end()) order.push_back(l);
    };
    for (const auto& f : mono_.factors)
      if (f.is_free_marker()) visit(f);
    for (const auto& f : mono_.factors)
      if (!f.is_free_marker()) visit(f);
    const int maxlabel = order.empty() ? 0 : *std::max_element(order.begin(), order.end()) + 1;
    pos_.assign(static_cast<std::size_t>(maxlabel), -1);
    for (std::size_t i = 0; i < order.size(); ++i) pos_[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    depth_count_ = static_cast<int>(order.size());
    label_at_ = order;
    completes_.assign(order.size() + 1, {});
    for (std::size_t fi = 0; fi < mono_.factors.size(); ++fi) {
      int last = -1;
      for (int l : mono_.factors[fi].labels) last = std::max(last, pos_[static_cast<std::size_t>(l)]);
      completes_[static_cast<std::size_t>(last + 1)].push_back(fi);
    }
    value_.assign(static_cast<std::size_t>(maxlabel), 0);
  }

  /// Full contraction; (a, b) fixes the two free-pair slots in order.
  T run(int a = -1, int b = -1) {
    free_a_ = a;
    free_b_ = b;
    T total(0);
    T one(1);
    if (!multiply_completed(0, one)) return total;
    recurse(0, one, total);
    return total;
  }

 private:
  bool multiply_completed(std::size_t depth, T& acc) {
    for (std::size_t fi : completes_[depth]) {
      const Factor& f = mono_.factors[fi];
      if (f.is_free_marker()) {
        const int x = value_[static_cast<std::size_t>(f.labels[0])];
        const int y = value_[static_cast<std::size_t>(f.labels[1])];
        if (x != free_a_ || y != free_b_) return false;
      } else {
        idx_.clear();
        for (int l : f.labels) idx_.push_back(value_[static_cast<std::size_t>(l)]);
        const T& r = c_.at(idx_);
        if (r == T(0)) return false;
        acc *= r;
      }
    }
    return true;
  }

  void recurse(int depth, const T& acc, T& total) {
    if (depth == depth_count_) {
      total += acc;
      return;
    }
    const auto label = static_cast<std::size_t>(label_at_[static_cast<std::size_t>(depth)]);
    for (int v = 0; v < c_.dim(); ++v) {
      value_[label] = v;
      T next = acc;
      if (multiply_completed(static_cast<std::size_t>(depth + 1), next)) recurse(depth + 1, next, total);
    }
  }

  const Monomial& mono_;
  const CurvatureData<T>& c_;
  std::vector<int> pos_;
  std::vector<int> label_at_;
  std::vector<std::vector<std::size_t>> completes_;
  std::vector<int> value_;
  std::vector<int> idx_;
  int depth_count_ = 0;
  int free_a_ = -1;
  int free_b_ = -1;
};

inline int max_derivs(const InvariantPolynomial& p) {
  int d = 0;
  for (const auto& [k, c] : p.terms()) d = std::max(d, k.max_derivs());
  return d;
}

template <class T>
void check_derivative_data(const InvariantPolynomial& p, const CurvatureData<T>& c) {
  if (max_derivs(p) > c.max_deriv())
    throw CapabilityError("polynomial needs " + std::to_string(max_derivs(p)) +
                          " covariant derivatives but the sample carries " + std::to_string(c.max_deriv()));
}

}  // namespace detail

/// Scalar contraction of one scalar monomial in the sample's dimension.
template <class T>
T evaluate_monomial(const Monomial& m, const CurvatureData<T>& c) {
  if (m.valence() != Valence::scalar) throw ArithmeticError("scalar evaluation of a 2-form valued monomial");
  return detail::ContractionSum<T>(m, c).run();
}

/// Components of a 2-form valued monomial, symmetrized over the free pair.
template <class T>
SymMatrix<T> evaluate_monomial_sym2(const Monomial& m, const CurvatureData<T>& c) {
  if (m.valence() != Valence::sym2) throw ArithmeticError("2-form evaluation of a scalar monomial");
  const int dim = c.dim();
  SymMatrix<T> out(dim);
  detail::ContractionSum<T> sum(m, c);
  std::vector<T> raw(static_cast<std::size_t>(dim * dim));
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) raw[static_cast<std::size_t>(a * dim + b)] = sum.run(a, b);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      out(a, b) = (raw[static_cast<std::size_t>(a * dim + b)] + raw[static_cast<std::size_t>(b * dim + a)]) / T(2);
  return out;
}

/// Value of a scalar invariant on the sample, summing each contraction over
/// indices 1..dim.
template <class T>
T evaluate(const InvariantPolynomial& p, const CurvatureData<T>& c) {
  if (p.valence() != Valence::scalar) throw ArithmeticError("use evaluate_sym2 for 2-form valued invariants");
  detail::check_derivative_data(p, c);
  T total(0);
  for (const auto& [k, coeff] : p.terms()) {
    T v = evaluate_monomial(k, c);
    if (!(v == T(0))) total += T(coeff) * v;
  }
  return total;
}

/// Component matrix of a 2-form valued invariant on the sample.
template <class T>
SymMatrix<T> evaluate_sym2(const InvariantPolynomial& p, const CurvatureData<T>& c) {
  if (p.valence() != Valence::sym2) throw ArithmeticError("use evaluate for scalar invariants");
  detail::check_derivative_data(p, c);
  SymMatrix<T> total(c.dim());
  for (const auto& [k, coeff] : p.terms()) {
    SymMatrix<T> v = evaluate_monomial_sym2(k, c);
    for (std::size_t q = 0; q < v.v.size(); ++q) total.v[q] += T(coeff) * v.v[q];
  }
  return total;
}

namespace detail {

// Visits every injective index tuple (i_1..i_p) into 0..m-1 and every
// permutation sigma; the nonzero terms of det(delta_{i_a j_b}) are exactly
// j_{sigma(a)} = i_a with sign sgn(sigma).
template <class Visit>
void for_each_wedge_term(int m, int p, Visit&& visit) {
  if (p > m) return;
  const auto& perms = signed_permutations(p);
  std::vector<int> i(static_cast<std::size_t>(p));
  std::vector<int> j(static_cast<std::size_t>(p));
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  auto rec = [&](auto&& self, int a) -> void {
    if (a == p) {
      for (const auto& s : perms) {
        for (int q = 0; q < p; ++q) j[static_cast<std::size_t>(s.image[static_cast<std::size_t>(q)])] = i[static_cast<std::size_t>(q)];
        visit(i, j, s.sign);
      }
      return;
    }
    for (int v = 0; v < m; ++v) {
      if (used[static_cast<std::size_t>(v)]) continue;
      used[static_cast<std::size_t>(v)] = true;
      i[static_cast<std::size_t>(a)] = v;
      self(self, a + 1);
      used[static_cast<std::size_t>(v)] = false;
    }
  };
  rec(rec, 0);
}

// Product R_{i1 i2 j2 j1} ... R_{i(n-1) i(n) j(n) j(n-1)}.
template <class T>
T curvature_chain(const CurvatureData<T>& c, const std::vector<int>& i, const std::vector<int>& j, int n) {
  T prod(1);
  for (int f = 0; f < n; f += 2) {
    const auto a = static_cast<std::size_t>(f);
    const T& r = c(i[a], i[a + 1], j[a + 1], j[a]);
    if (r == T(0)) return T(0);
    prod *= r;
  }
  return prod;
}

}  // namespace detail

/// E_{m,n} evaluated from its defining sum: curvature chain contracted with
/// the generalized Kronecker delta det(delta_{i_a j_b}) (no 1/n! factor).
/// Vanishes identically when n exceeds the dimension.
template <class T>
T pfaffian_direct(const CurvatureData<T>& c, int n) {
  if (n < 0 || n % 2 != 0) throw DomainError("Pfaffian weight must be even and non-negative");
  T total(0);
  detail::for_each_wedge_term(c.dim(), n, [&](const std::vector<int>& i, const std::vector<int>& j, int sign) {
    T term = detail::curvature_chain(c, i, j, n);
    if (term == T(0)) return;
    if (sign > 0)
      total += term;
    else
      total -= term;
  });
  return total;
}

/// T^2_{m,n} evaluated from its defining sum with n + 1 wedge factors; the
/// last pair (i_{n+1}, j_{n+1}) feeds e^i o e^j.
template <class T>
SymMatrix<T> t2_direct(const CurvatureData<T>& c, int n) {
  if (n < 0 || n % 2 != 0) throw DomainError("T2 weight must be even and non-negative");
  SymMatrix<T> out(c.dim());
  const auto last = static_cast<std::size_t>(n);
  detail::for_each_wedge_term(c.dim(), n + 1, [&](const std::vector<int>& i, const std::vector<int>& j, int sign) {
    T term = detail::curvature_chain(c, i, j, n);
    if (term == T(0)) return;
    if (sign < 0) term = -term;
    term /= T(2);
    out(i[last], j[last]) += term;
    out(j[last], i[last]) += term;
  });
  return out;
}

}  // namespace curvid
