#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "curvid/errors.hpp"
#include "curvid/rational.hpp"

namespace curvid {

/// Frame components of R_{ijkl} and its covariant derivatives R_{ijkl;a},
/// R_{ijkl;ab} at one point of an m-dimensional manifold.
///
/// Convention: R_{ijkl} = g(R(e_i, e_j) e_k, e_l) with
/// R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y], so R_{ijji} is the sectional
/// curvature of span{e_i, e_j} and tau = R_{ijji} > 0 on the round sphere.
/// Derivative slots are ordered: R_{ijkl;ab} differentiates in a first.
template <class T>
class CurvatureData {
 public:
  CurvatureData() = default;
  CurvatureData(int dim, int max_deriv) : dim_(dim), max_deriv_(max_deriv) {
    if (dim < 1) throw DomainError("dimension must be positive");
    if (max_deriv < 0 || max_deriv > 2) throw CapabilityError("curvature derivatives are supported up to order 2");
    for (int k = 0; k <= max_deriv; ++k) values_[static_cast<std::size_t>(k)].assign(power(4 + k), T(0));
  }

  int dim() const { return dim_; }
  int max_deriv() const { return max_deriv_; }

  /// Components with `derivs` derivative slots, flattened row-major over
  /// (i, j, k, l, a, b).
  std::span<const T> values(int derivs) const { return values_.at(static_cast<std::size_t>(derivs)); }
  std::span<T> values(int derivs) { return values_.at(static_cast<std::size_t>(derivs)); }

  std::size_t offset(std::span<const int> idx) const {
    std::size_t off = 0;
    for (int i : idx) off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
    return off;
  }

  const T& operator()(int i, int j, int k, int l) const { return values_[0][offset(std::array{i, j, k, l})]; }
  T& operator()(int i, int j, int k, int l) { return values_[0][offset(std::array{i, j, k, l})]; }

  const T& at(std::span<const int> idx) const {
    return values_.at(idx.size() - 4)[offset(idx)];
  }
  T& at(std::span<const int> idx) { return values_.at(idx.size() - 4)[offset(idx)]; }

  friend bool operator==(const CurvatureData& a, const CurvatureData& b) {
    return a.dim_ == b.dim_ && a.max_deriv_ == b.max_deriv_ && a.values_ == b.values_;
  }

 private:
  std::size_t power(int e) const {
    std::size_t p = 1;
    for (int i = 0; i < e; ++i) p *= static_cast<std::size_t>(dim_);
    return p;
  }

  int dim_ = 0;
  int max_deriv_ = 0;
  std::array<std::vector<T>, 3> values_;
};

/// Constant sectional curvature kappa: R_{ijkl} = kappa (d_il d_jk - d_ik d_jl).
template <class T>
CurvatureData<T> constant_curvature(int m, const T& kappa, int max_deriv = 0) {
  CurvatureData<T> c(m, max_deriv);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          int v = (i == l && j == k ? 1 : 0) - (i == k && j == l ? 1 : 0);
          if (v != 0) c(i, j, k, l) = kappa * T(v);
        }
  return c;
}

/// Adds phi ^ phi to R: R_{ijkl} += phi_il phi_jk - phi_ik phi_jl.
template <class T>
void add_wedge_square(CurvatureData<T>& c, const std::vector<T>& phi) {
  const int m = c.dim();
  auto p = [&](int a, int b) -> const T& { return phi[static_cast<std::size_t>(a * m + b)]; };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) c(i, j, k, l) += p(i, l) * p(j, k) - p(i, k) * p(j, l);
}

/// Random algebraic curvature tensor: a sum of num_terms wedge squares of
/// random symmetric rational matrices. Deterministic in seed.
inline CurvatureData<Rational> random_algebraic_curvature(int m, std::uint64_t seed, int num_terms = 0, int bound = 9) {
  if (m < 1) throw DomainError("dimension must be positive");
  if (num_terms <= 0) num_terms = m + 1;
  Rng rng(seed);
  CurvatureData<Rational> c(m, 0);
  for (int t = 0; t < num_terms; ++t) {
    std::vector<Rational> phi(static_cast<std::size_t>(m * m));
    for (int a = 0; a < m; ++a)
      for (int b = a; b < m; ++b) {
        Rational q = random_small_rational(rng, bound);
        phi[static_cast<std::size_t>(a * m + b)] = q;
        phi[static_cast<std::size_t>(b * m + a)] = q;
      }
    add_wedge_square(c, phi);
  }
  return c;
}

/// Homogeneity scaling: R -> s^2 R, R;a -> s^3 R;a, R;ab -> s^4 R;ab.
/// This is the effect of g -> c^2 g with s = 1/c.
template <class T>
CurvatureData<T> scale_curvature(const CurvatureData<T>& c, const T& s) {
  CurvatureData<T> out = c;
  T f = s * s;
  for (int k = 0; k <= c.max_deriv(); ++k) {
    for (auto& v : out.values(k)) v *= f;
    f *= s;
  }
  return out;
}

/// Checks pair antisymmetry, pair-exchange symmetry and the first Bianchi
/// identity on every derivative order present.
template <class T>
bool has_curvature_symmetries(const CurvatureData<T>& c) {
  const int m = c.dim();
  for (int d = 0; d <= c.max_deriv(); ++d) {
    const int tails = d == 0 ? 1 : (d == 1 ? m : m * m);
    for (int t = 0; t < tails; ++t) {
      std::array<int, 6> idx{};
      if (d >= 1) idx[4] = d == 1 ? t : t / m;
      if (d >= 2) idx[5] = t % m;
      const std::size_t n = 4 + static_cast<std::size_t>(d);
      auto val = [&](int i, int j, int k, int l) -> const T& {
        std::array<int, 6> x = idx;
        x[0] = i;
        x[1] = j;
        x[2] = k;
        x[3] = l;
        return c.at(std::span<const int>(x.data(), n));
      };
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) {
              const T& r = val(i, j, k, l);
              if (!(r == -val(j, i, k, l))) return false;
              if (!(r == -val(i, j, l, k))) return false;
              if (!(r == val(k, l, i, j))) return false;
              if (!(r + val(i, k, l, j) + val(i, l, j, k) == T(0))) return false;
            }
    }
  }
  return true;
}

}  // namespace curvid
