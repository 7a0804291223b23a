#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "curvid/curvature.hpp"
#include "curvid/errors.hpp"
#include "curvid/rational.hpp"

namespace curvid {

/// Multivariate polynomial in up to 8 variables truncated at a total degree.
///
/// Exponent vectors are packed one byte per variable into a 64-bit key, so
/// multiplying monomials is key addition.
class TruncatedPoly {
 public:
  using Key = std::uint64_t;
  static constexpr int kMaxVars = 8;

  TruncatedPoly() = default;
  explicit TruncatedPoly(int cap) : cap_(cap) {}

  static Key key_of(const std::array<int, kMaxVars>& e) {
    Key k = 0;
    for (int i = kMaxVars - 1; i >= 0; --i) k = (k << 8) | static_cast<Key>(e[static_cast<std::size_t>(i)]);
    return k;
  }
  static int exponent(Key k, int var) { return static_cast<int>((k >> (8 * var)) & 0xFF); }
  static int degree(Key k) {
    int d = 0;
    for (int i = 0; i < kMaxVars; ++i) d += exponent(k, i);
    return d;
  }
  static Key unit(int var) { return Key{1} << (8 * var); }

  int cap() const { return cap_; }
  const std::map<Key, Rational>& coeffs() const { return c_; }

  Rational coeff(Key k) const {
    auto it = c_.find(k);
    return it == c_.end() ? Rational(0) : it->second;
  }
  Rational constant() const { return coeff(0); }

  void add(Key k, const Rational& v) {
    if (is_zero(v) || degree(k) > cap_) return;
    auto [it, inserted] = c_.try_emplace(k, v);
    if (!inserted) {
      it->second += v;
      if (is_zero(it->second)) c_.erase(it);
    }
  }

  TruncatedPoly& operator+=(const TruncatedPoly& o) {
    for (const auto& [k, v] : o.c_) add(k, v);
    return *this;
  }
  TruncatedPoly& operator-=(const TruncatedPoly& o) {
    for (const auto& [k, v] : o.c_) add(k, -v);
    return *this;
  }
  TruncatedPoly& operator*=(const Rational& s) {
    if (is_zero(s)) c_.clear();
    for (auto& [k, v] : c_) v *= s;
    return *this;
  }

  friend TruncatedPoly operator+(TruncatedPoly a, const TruncatedPoly& b) { return a += b; }
  friend TruncatedPoly operator-(TruncatedPoly a, const TruncatedPoly& b) { return a -= b; }
  friend TruncatedPoly operator*(TruncatedPoly a, const Rational& s) { return a *= s; }

  /// Product truncated at total degree cap.
  static TruncatedPoly product(const TruncatedPoly& a, const TruncatedPoly& b, int cap) {
    TruncatedPoly out(cap);
    if (a.c_.empty() || b.c_.empty()) return out;
    std::vector<std::vector<const std::pair<const Key, Rational>*>> buckets(static_cast<std::size_t>(cap) + 1);
    for (const auto& term : b.c_) {
      const int d = degree(term.first);
      if (d <= cap) buckets[static_cast<std::size_t>(d)].push_back(&term);
    }
    for (const auto& [ka, va] : a.c_) {
      const int da = degree(ka);
      for (int db = 0; db + da <= cap; ++db)
        for (const auto* tb : buckets[static_cast<std::size_t>(db)]) out.add(ka + tb->first, va * tb->second);
    }
    return out;
  }

  /// Partial derivative in variable var; the cap drops by one.
  TruncatedPoly derivative(int var) const {
    TruncatedPoly out(cap_ - 1);
    for (const auto& [k, v] : c_) {
      const int e = exponent(k, var);
      if (e > 0) out.add(k - unit(var), v * e);
    }
    return out;
  }

  TruncatedPoly truncated(int cap) const {
    TruncatedPoly out(cap);
    for (const auto& [k, v] : c_) out.add(k, v);
    return out;
  }

  friend bool operator==(const TruncatedPoly& a, const TruncatedPoly& b) { return a.c_ == b.c_; }

 private:
  int cap_ = 0;
  std::map<Key, Rational> c_;
};

/// All exponent keys in `vars` variables with total degree in [lo, hi].
inline std::vector<TruncatedPoly::Key> exponents_in_range(int vars, int lo, int hi) {
  std::vector<TruncatedPoly::Key> out;
  std::array<int, TruncatedPoly::kMaxVars> e{};
  auto rec = [&](auto&& self, int var, int remaining) -> void {
    if (var == vars) {
      const int deg = hi - remaining;
      if (deg >= lo) out.push_back(TruncatedPoly::key_of(e));
      return;
    }
    for (int p = 0; p <= remaining; ++p) {
      e[static_cast<std::size_t>(var)] = p;
      self(self, var + 1, remaining - p);
    }
    e[static_cast<std::size_t>(var)] = 0;
  };
  rec(rec, 0, hi);
  return out;
}

/// Taylor jet of a metric at a point in normalized coordinates:
/// g_ij(0) = delta_ij and dg_ij(0) = 0.
struct MetricJet {
  int dim = 0;
  int order = 0;
  std::vector<TruncatedPoly> g;  // dim*dim, symmetric

  const TruncatedPoly& operator()(int i, int j) const { return g[static_cast<std::size_t>(i * dim + j)]; }
  TruncatedPoly& operator()(int i, int j) { return g[static_cast<std::size_t>(i * dim + j)]; }

  static MetricJet flat(int m, int order) {
    if (m < 1 || m > TruncatedPoly::kMaxVars) throw CapabilityError("jet dimension must be in 1..8");
    MetricJet j{m, order, std::vector<TruncatedPoly>(static_cast<std::size_t>(m * m), TruncatedPoly(order))};
    for (int i = 0; i < m; ++i) j(i, i).add(0, 1);
    return j;
  }

  void set_symmetric(int i, int k, TruncatedPoly::Key e, const Rational& v) {
    (*this)(i, k).add(e, v);
    if (i != k) (*this)(k, i).add(e, v);
  }

  bool normalized() const {
    for (int i = 0; i < dim; ++i)
      for (int k = 0; k < dim; ++k) {
        const auto& p = (*this)(i, k);
        if (p.constant() != Rational(i == k ? 1 : 0)) return false;
        for (int v = 0; v < dim; ++v)
          if (!is_zero(p.coeff(TruncatedPoly::unit(v)))) return false;
        if (!(p == (*this)(k, i))) return false;
      }
    return true;
  }
};

/// Random normalized jet: every coefficient of degree 2..order is an
/// independent small rational (|num| <= coefficient_bound).
inline MetricJet random_metric_jet(int m, int order, std::uint64_t seed, int coefficient_bound = 9) {
  if (order < 2) throw DomainError("jet order must be at least 2");
  MetricJet j = MetricJet::flat(m, order);
  Rng rng(seed);
  const auto keys = exponents_in_range(m, 2, order);
  for (int i = 0; i < m; ++i)
    for (int k = i; k < m; ++k)
      for (auto e : keys) j.set_symmetric(i, k, e, random_small_rational(rng, coefficient_bound));
  return j;
}

/// Degree-4 jet of the round sphere S^m(1) in geodesic normal coordinates:
/// g_ij = d_ij + (sin^2 r / r^2 - 1)(d_ij - x_i x_j / r^2).
inline MetricJet sphere_normal_jet(int m) {
  MetricJet j = MetricJet::flat(m, 4);
  using Key = TruncatedPoly::Key;
  // sin^2 r / r^2 - 1 = -r^2/3 + 2 r^4/45 - ...
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) {
      for (int a = 0; a < m; ++a) {
        if (i == k) j(i, k).add(TruncatedPoly::unit(a) * 2, Rational(-1, 3));
        for (int b = 0; b < m; ++b) {
          const Key r4 = TruncatedPoly::unit(a) * 2 + TruncatedPoly::unit(b) * 2;
          if (i == k) j(i, k).add(r4, Rational(2, 45));
        }
        const Key xixkr2 = TruncatedPoly::unit(i) + TruncatedPoly::unit(k) + TruncatedPoly::unit(a) * 2;
        j(i, k).add(xixkr2, Rational(-2, 45));
      }
      j(i, k).add(TruncatedPoly::unit(i) + TruncatedPoly::unit(k), Rational(1, 3));
    }
  return j;
}

/// Jet of c^2 g in rescaled normal coordinates y = c x: g_ij(y / c).
inline MetricJet scale_metric_jet(const MetricJet& j, const Rational& c) {
  MetricJet out = MetricJet::flat(j.dim, j.order);
  for (int i = 0; i < j.dim; ++i)
    for (int k = 0; k < j.dim; ++k) {
      TruncatedPoly p(j.order);
      for (const auto& [key, v] : j(i, k).coeffs()) {
        Rational f = 1;
        for (int d = 0; d < TruncatedPoly::degree(key); ++d) f /= c;
        p.add(key, v * f);
      }
      out(i, k) = p;
    }
  return out;
}

/// Curvature and its covariant derivatives up to order k at the origin of a
/// normalized jet.
///
/// Christoffel symbols come from the truncated inverse metric (Neumann
/// series); R_{ijk}^l = d_i G_jk^l - d_j G_ik^l + G_in^l G_jk^n - G_jn^l G_ik^n
/// is lowered on the last slot. Because the Christoffel symbols vanish at the
/// origin, R_{;a} = d_a R and R_{;ab} = d_b d_a R minus the d_b G_a terms.
inline CurvatureData<Rational> curvature_from_jet(const MetricJet& j, int k) {
  if (k < 0 || k > 2) throw CapabilityError("covariant derivatives are supported up to order 2");
  if (j.order < k + 2) throw CapabilityError("jet order " + std::to_string(j.order) + " too low for " +
                                             std::to_string(k) + " covariant derivatives");
  const int m = j.dim;
  auto at = [m](int a, int b) { return static_cast<std::size_t>(a * m + b); };
  auto at3 = [m](int a, int b, int c) { return static_cast<std::size_t>((a * m + b) * m + c); };
  const int cap_gamma = k + 1;  // Christoffels are needed to this degree
  const int cap_r = k;

  // Inverse metric: sum_p (delta - g)^p, truncated.
  std::vector<TruncatedPoly> h(static_cast<std::size_t>(m * m), TruncatedPoly(cap_gamma));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      h[at(a, b)] = j(a, b).truncated(cap_gamma);
      if (a == b) h[at(a, b)].add(0, -1);
      h[at(a, b)] *= Rational(-1);
    }
  std::vector<TruncatedPoly> ginv(static_cast<std::size_t>(m * m), TruncatedPoly(cap_gamma));
  for (int a = 0; a < m; ++a) ginv[at(a, a)].add(0, 1);
  std::vector<TruncatedPoly> power = ginv;
  for (int p = 1; 2 * p <= cap_gamma; ++p) {
    std::vector<TruncatedPoly> next(static_cast<std::size_t>(m * m), TruncatedPoly(cap_gamma));
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c) next[at(a, b)] += TruncatedPoly::product(power[at(a, c)], h[at(c, b)], cap_gamma);
    power = std::move(next);
    for (std::size_t q = 0; q < ginv.size(); ++q) ginv[q] += power[q];
  }

  // First derivatives of g, to degree cap_gamma.
  std::vector<TruncatedPoly> dg(static_cast<std::size_t>(m * m * m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) dg[at3(a, b, c)] = j(a, b).derivative(c).truncated(cap_gamma);

  // Gamma_{ab}^c = 1/2 g^{cl} (d_a g_bl + d_b g_al - d_l g_ab)
  std::vector<TruncatedPoly> gamma(static_cast<std::size_t>(m * m * m), TruncatedPoly(cap_gamma));
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b)
      for (int l = 0; l < m; ++l) {
        TruncatedPoly bsum = dg[at3(b, l, a)] + dg[at3(a, l, b)] - dg[at3(a, b, l)];
        bsum *= Rational(1, 2);
        for (int c = 0; c < m; ++c) {
          gamma[at3(a, b, c)] += TruncatedPoly::product(ginv[at(c, l)], bsum, cap_gamma);
        }
      }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < a; ++b)
      for (int c = 0; c < m; ++c) gamma[at3(a, b, c)] = gamma[at3(b, a, c)];

  std::vector<TruncatedPoly> dgamma(static_cast<std::size_t>(m * m * m * m));
  auto at4 = [m](int a, int b, int c, int d) { return static_cast<std::size_t>(((a * m + b) * m + c) * m + d); };
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c) dgamma[at4(i, a, b, c)] = gamma[at3(a, b, c)].derivative(i).truncated(cap_r);

  // Lowered curvature R_{ijkl} = g_{lp} R_{ijk}^p, to degree cap_r.
  std::vector<TruncatedPoly> gamma_r(gamma.size());
  for (std::size_t q = 0; q < gamma.size(); ++q) gamma_r[q] = gamma[q].truncated(cap_r);
  // Only i < j is computed; the antisymmetry in (i, j) of the Riemann tensor
  // (exact for the truncated jet) fills the rest.
  std::vector<TruncatedPoly> rup(static_cast<std::size_t>(m * m * m * m), TruncatedPoly(cap_r));
  for (int i = 0; i < m; ++i)
    for (int jj = i + 1; jj < m; ++jj)
      for (int kk = 0; kk < m; ++kk)
        for (int l = 0; l < m; ++l) {
          TruncatedPoly r = dgamma[at4(i, jj, kk, l)] - dgamma[at4(jj, i, kk, l)];
          for (int n = 0; n < m; ++n) {
            r += TruncatedPoly::product(gamma_r[at3(i, n, l)], gamma_r[at3(jj, kk, n)], cap_r);
            r -= TruncatedPoly::product(gamma_r[at3(jj, n, l)], gamma_r[at3(i, kk, n)], cap_r);
          }
          rup[at4(i, jj, kk, l)] = std::move(r);
        }
  std::vector<TruncatedPoly> g_r(static_cast<std::size_t>(m * m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) g_r[at(a, b)] = j(a, b).truncated(cap_r);
  std::vector<TruncatedPoly> rlow(static_cast<std::size_t>(m * m * m * m), TruncatedPoly(cap_r));
  for (int i = 0; i < m; ++i)
    for (int jj = i + 1; jj < m; ++jj)
      for (int kk = 0; kk < m; ++kk)
        for (int l = 0; l < m; ++l)
          for (int p = 0; p < m; ++p)
            rlow[at4(i, jj, kk, l)] += TruncatedPoly::product(g_r[at(l, p)], rup[at4(i, jj, kk, p)], cap_r);

  CurvatureData<Rational> out(m, k);
  for (int i = 0; i < m; ++i)
    for (int jj = i + 1; jj < m; ++jj)
      for (int kk = 0; kk < m; ++kk)
        for (int l = 0; l < m; ++l) {
          const auto& r = rlow[at4(i, jj, kk, l)];
          out(i, jj, kk, l) = r.constant();
          out(jj, i, kk, l) = -out(i, jj, kk, l);
          for (int a = 0; k >= 1 && a < m; ++a) {
            std::array<int, 5> idx{i, jj, kk, l, a};
            std::array<int, 5> swapped{jj, i, kk, l, a};
            out.at(idx) = r.coeff(TruncatedPoly::unit(a));
            out.at(swapped) = -out.at(idx);
          }
        }
  if (k < 2) return out;

  // d_b Gamma_{ac}^p at the origin, dense.
  std::vector<Rational> dg0(static_cast<std::size_t>(m * m * m * m));
  for (std::size_t q = 0; q < dg0.size(); ++q) dg0[q] = dgamma[q].constant();

  // R_{ijkl;ab} keeps the algebraic symmetries of R in its first four slots,
  // so i < j and k < l suffice.
  for (int i = 0; i < m; ++i)
    for (int jj = i + 1; jj < m; ++jj)
      for (int kk = 0; kk < m; ++kk)
        for (int l = kk + 1; l < m; ++l) {
          const auto& r = rlow[at4(i, jj, kk, l)];
          const std::array<int, 4> slots{i, jj, kk, l};
          for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
              const auto key = TruncatedPoly::unit(a) + TruncatedPoly::unit(b);
              Rational v = r.coeff(key);
              if (a == b) v *= 2;
              for (std::size_t s = 0; s < 4; ++s) {
                for (int p = 0; p < m; ++p) {
                  const Rational& dG = dg0[at4(b, a, slots[s], p)];
                  if (is_zero(dG)) continue;
                  std::array<int, 4> t = slots;
                  t[s] = p;
                  const Rational& rv = out(t[0], t[1], t[2], t[3]);
                  if (!is_zero(rv)) v -= dG * rv;
                }
              }
              std::array<int, 6> idx{i, jj, kk, l, a, b};
              out.at(idx) = v;
              std::array<int, 6> x1{jj, i, kk, l, a, b};
              std::array<int, 6> x2{i, jj, l, kk, a, b};
              std::array<int, 6> x3{jj, i, l, kk, a, b};
              out.at(x1) = -v;
              out.at(x2) = -v;
              out.at(x3) = v;
            }
        }
  return out;
}

}  // namespace curvid
