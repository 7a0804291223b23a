#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "curvid/curvature.hpp"
#include "curvid/errors.hpp"
#include "curvid/evaluate.hpp"
#include "curvid/rational.hpp"

namespace curvid {

/// Symmetric 2-tensor field on the torus whose components are finite sums
/// A cos(k1 x^1 + k2 x^2 + phase); it depends on the first two coordinates
/// only.
struct TrigTensor {
  struct Term {
    int i = 0;
    int j = 0;
    double amplitude = 0;
    int k1 = 0;
    int k2 = 0;
    double phase = 0;
  };

  int dim = 0;
  std::vector<Term> terms;

  /// Value, first and second derivatives of component (i, j) at (x1, x2).
  /// d[a] = d/dx^a, dd[a][b] = d^2/dx^a dx^b (zero outside a, b < 2).
  void component(int i, int j, double x1, double x2, double& v, std::array<double, 2>& d,
                 std::array<std::array<double, 2>, 2>& dd) const {
    v = 0;
    d = {0, 0};
    dd = {{{0, 0}, {0, 0}}};
    for (const auto& t : terms) {
      if (!((t.i == i && t.j == j) || (t.i == j && t.j == i))) continue;
      const double arg = t.k1 * x1 + t.k2 * x2 + t.phase;
      const double c = t.amplitude * std::cos(arg);
      const double s = t.amplitude * std::sin(arg);
      const std::array<double, 2> k{static_cast<double>(t.k1), static_cast<double>(t.k2)};
      v += c;
      for (int a = 0; a < 2; ++a) {
        d[static_cast<std::size_t>(a)] -= k[static_cast<std::size_t>(a)] * s;
        for (int b = 0; b < 2; ++b)
          dd[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] -=
              k[static_cast<std::size_t>(a)] * k[static_cast<std::size_t>(b)] * c;
      }
    }
  }

  double max_abs() const {
    double s = 0;
    for (const auto& t : terms) s += std::abs(t.amplitude);
    return s;
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(6);
    for (std::size_t q = 0; q < terms.size(); ++q) {
      const auto& t = terms[q];
      if (q) os << " + ";
      os << t.amplitude << " cos(" << t.k1 << " x1 + " << t.k2 << " x2 + " << t.phase << ") e" << t.i + 1 << "e"
         << t.j + 1;
    }
    return os.str();
  }

  /// Random field with `count` terms; amplitudes in [-1, 1], wave numbers in
  /// {-2..2}^2 \ {0}, components in the m x m upper triangle.
  static TrigTensor random(int m, std::uint64_t seed, int count = 4) {
    Rng rng(seed);
    std::uniform_int_distribution<int> idx(0, m - 1), wave(-2, 2);
    std::uniform_real_distribution<double> amp(-1.0, 1.0), ph(0.0, 2 * std::numbers::pi);
    TrigTensor t;
    t.dim = m;
    for (int c = 0; c < count; ++c) {
      Term term;
      term.i = idx(rng);
      term.j = idx(rng);
      if (term.i > term.j) std::swap(term.i, term.j);
      term.amplitude = amp(rng);
      do {
        term.k1 = wave(rng);
        term.k2 = wave(rng);
      } while (term.k1 == 0 && term.k2 == 0);
      term.phase = ph(rng);
      t.terms.push_back(term);
    }
    return t;
  }
};

/// Metric delta + a p + eps h on the torus [0, 2 pi)^m, at a point (x1, x2).
/// Produces frame components of R, the frame components of h, and the
/// volume density sqrt(det g).
struct TorusPoint {
  CurvatureData<double> curvature;
  SymMatrix<double> h_frame;
  double density = 1;
};

namespace detail {

inline bool cholesky(const std::vector<double>& g, int m, std::vector<double>& l) {
  l.assign(static_cast<std::size_t>(m * m), 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = g[static_cast<std::size_t>(i * m + j)];
      for (int k = 0; k < j; ++k) s -= l[static_cast<std::size_t>(i * m + k)] * l[static_cast<std::size_t>(j * m + k)];
      if (i == j) {
        if (s <= 0) return false;
        l[static_cast<std::size_t>(i * m + i)] = std::sqrt(s);
      } else {
        l[static_cast<std::size_t>(i * m + j)] = s / l[static_cast<std::size_t>(j * m + j)];
      }
    }
  return true;
}

}  // namespace detail

inline TorusPoint torus_point(const TrigTensor& p, double a, const TrigTensor& h, double eps, double x1, double x2) {
  const int m = p.dim;
  const auto M = static_cast<std::size_t>(m);
  auto ix = [m](int i, int j) { return static_cast<std::size_t>(i * m + j); };
  auto ix3 = [m](int i, int j, int k) { return static_cast<std::size_t>((i * m + j) * m + k); };
  auto ix4 = [m](int i, int j, int k, int l) { return static_cast<std::size_t>(((i * m + j) * m + k) * m + l); };

  std::vector<double> g(M * M), dg(M * M * M, 0.0), ddg(M * M * M * M, 0.0), hv(M * M);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double v, w;
      std::array<double, 2> d, e;
      std::array<std::array<double, 2>, 2> dd, ee;
      p.component(i, j, x1, x2, v, d, dd);
      h.component(i, j, x1, x2, w, e, ee);
      g[ix(i, j)] = (i == j ? 1.0 : 0.0) + a * v + eps * w;
      hv[ix(i, j)] = w;
      for (int u = 0; u < 2 && u < m; ++u) {
        dg[ix3(u, i, j)] = a * d[static_cast<std::size_t>(u)] + eps * e[static_cast<std::size_t>(u)];
        for (int t = 0; t < 2 && t < m; ++t)
          ddg[ix4(u, t, i, j)] = a * dd[static_cast<std::size_t>(u)][static_cast<std::size_t>(t)] +
                                 eps * ee[static_cast<std::size_t>(u)][static_cast<std::size_t>(t)];
      }
    }

  std::vector<double> l;
  if (!detail::cholesky(g, m, l)) throw NumericalError("perturbed metric is not positive definite");
  // Inverse metric from the Cholesky factor.
  std::vector<double> linv(M * M, 0.0);
  for (int i = 0; i < m; ++i) {
    linv[ix(i, i)] = 1.0 / l[ix(i, i)];
    for (int j = 0; j < i; ++j) {
      double s = 0;
      for (int k = j; k < i; ++k) s -= l[ix(i, k)] * linv[ix(k, j)];
      linv[ix(i, j)] = s / l[ix(i, i)];
    }
  }
  std::vector<double> ginv(M * M, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) ginv[ix(i, j)] += linv[ix(k, i)] * linv[ix(k, j)];

  // Christoffel symbols of the first kind and their derivatives.
  // G1[i][j][l] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
  std::vector<double> g1(M * M * M), dg1(M * M * M * M, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        g1[ix3(i, j, k)] = 0.5 * (dg[ix3(i, j, k)] + dg[ix3(j, i, k)] - dg[ix3(k, i, j)]);
        for (int u = 0; u < m; ++u)
          dg1[ix4(u, i, j, k)] = 0.5 * (ddg[ix4(u, i, j, k)] + ddg[ix4(u, j, i, k)] - ddg[ix4(u, k, i, j)]);
      }
  // Gamma_ij^k = g^kl G1_ijl; d_u Gamma_ij^k = g^kl d_u G1_ijl + d_u g^kl G1_ijl
  std::vector<double> gam(M * M * M, 0.0), dgam(M * M * M * M, 0.0), dginv(M * M * M, 0.0);
  for (int u = 0; u < m; ++u)
    for (int k = 0; k < m; ++k)
      for (int l2 = 0; l2 < m; ++l2) {
        double s = 0;
        for (int p2 = 0; p2 < m; ++p2)
          for (int q = 0; q < m; ++q) s -= ginv[ix(k, p2)] * dg[ix3(u, p2, q)] * ginv[ix(q, l2)];
        dginv[ix3(u, k, l2)] = s;
      }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        double s = 0;
        for (int q = 0; q < m; ++q) s += ginv[ix(k, q)] * g1[ix3(i, j, q)];
        gam[ix3(i, j, k)] = s;
        for (int u = 0; u < m; ++u) {
          double t = 0;
          for (int q = 0; q < m; ++q) t += ginv[ix(k, q)] * dg1[ix4(u, i, j, q)] + dginv[ix3(u, k, q)] * g1[ix3(i, j, q)];
          dgam[ix4(u, i, j, k)] = t;
        }
      }

  // Coordinate R_{ijkl}, lowered on the last slot.
  std::vector<double> rc(M * M * M * M, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        std::vector<double> up(M, 0.0);
        for (int q = 0; q < m; ++q) {
          double s = dgam[ix4(i, j, k, q)] - dgam[ix4(j, i, k, q)];
          for (int n = 0; n < m; ++n) s += gam[ix3(i, n, q)] * gam[ix3(j, k, n)] - gam[ix3(j, n, q)] * gam[ix3(i, k, n)];
          up[static_cast<std::size_t>(q)] = s;
        }
        for (int l2 = 0; l2 < m; ++l2) {
          double s = 0;
          for (int q = 0; q < m; ++q) s += g[ix(l2, q)] * up[static_cast<std::size_t>(q)];
          rc[ix4(i, j, k, l2)] = s;
        }
      }

  // Orthonormal frame e_a = E^i_a d_i with E = L^{-T}.
  auto E = [&](int i, int a) { return linv[ix(a, i)]; };
  TorusPoint out{CurvatureData<double>(m, 0), SymMatrix<double>(m), 1.0};
  std::vector<double> t1(M * M * M * M, 0.0), t2(M * M * M * M, 0.0);
  // Transform one slot at a time.
  auto transform = [&](const std::vector<double>& in, std::vector<double>& o, int slot) {
    std::fill(o.begin(), o.end(), 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int l2 = 0; l2 < m; ++l2) {
            std::array<int, 4> idx{i, j, k, l2};
            const double v = in[ix4(i, j, k, l2)];
            if (v == 0.0) continue;
            const int c = idx[static_cast<std::size_t>(slot)];
            for (int a = 0; a < m; ++a) {
              idx[static_cast<std::size_t>(slot)] = a;
              o[ix4(idx[0], idx[1], idx[2], idx[3])] += E(c, a) * v;
            }
          }
  };
  transform(rc, t1, 0);
  transform(t1, t2, 1);
  transform(t2, t1, 2);
  transform(t1, t2, 3);
  std::copy(t2.begin(), t2.end(), out.curvature.values(0).begin());

  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double s = 0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) s += E(i, a) * E(j, b) * hv[ix(i, j)];
      out.h_frame(a, b) = s;
    }
  double det = 1;
  for (int i = 0; i < m; ++i) det *= l[ix(i, i)];
  out.density = det;
  return out;
}

/// Composite Gauss-Legendre rule on [0, 2 pi) with `panels` panels of
/// `order` nodes each.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  static QuadratureRule composite(int panels, int order = 6) {
    // Legendre nodes on [-1, 1] by Newton iteration.
    std::vector<double> x(static_cast<std::size_t>(order)), w(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
      double dp = 0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = z;
        for (int k = 2; k <= order; ++k) {
          const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = order * (z * p1 - p0) / (z * z - 1);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[static_cast<std::size_t>(i)] = z;
      w[static_cast<std::size_t>(i)] = 2 / ((1 - z * z) * dp * dp);
    }
    QuadratureRule q;
    const double h = 2 * std::numbers::pi / panels;
    for (int p = 0; p < panels; ++p)
      for (int i = 0; i < order; ++i) {
        q.nodes.push_back(h * p + h * (x[static_cast<std::size_t>(i)] + 1) / 2);
        q.weights.push_back(h * w[static_cast<std::size_t>(i)] / 2);
      }
    return q;
  }
};

struct VariationReport {
  int m = 0;
  int n = 0;
  std::uint64_t seed = 0;
  double epsilon = 0;
  double background_amplitude = 0;
  std::string background;
  std::string perturbation;
  double derivative_eps = 0;       // central difference at epsilon
  double derivative_half = 0;      // central difference at epsilon / 2
  double derivative = 0;           // Richardson combination
  double pairing = 0;              // integral of <T^2_{m,n}, h>
  double scale = 0;                // integral of |E_{m,n}| times max |h|
  std::optional<double> d;         // derivative / pairing when the pairing is nonzero
  double refinement_residual = 0;  // |derivative - derivative_half| relative to scale
  double quadrature_residual = 0;  // worst relative change between the two resolutions
  int panels = 0;
};

namespace detail {

// Integral over [0, 2 pi)^2 times (2 pi)^(m - 2) of f(point).
template <class F>
double torus_integral(const QuadratureRule& q, int m, F&& f) {
  double s = 0;
  for (std::size_t a = 0; a < q.nodes.size(); ++a) {
    double row = 0;
    for (std::size_t b = 0; b < q.nodes.size(); ++b) row += q.weights[b] * f(q.nodes[a], q.nodes[b]);
    s += q.weights[a] * row;
  }
  return s * std::pow(2 * std::numbers::pi, m - 2);
}

// Signed and absolute integrals of the same integrand in one pass.
template <class F>
std::pair<double, double> torus_integral_abs(const QuadratureRule& q, int m, F&& f) {
  double s = 0, sa = 0;
  for (std::size_t a = 0; a < q.nodes.size(); ++a) {
    double row = 0, row_abs = 0;
    for (std::size_t b = 0; b < q.nodes.size(); ++b) {
      const double v = f(q.nodes[a], q.nodes[b]);
      row += q.weights[b] * v;
      row_abs += q.weights[b] * std::abs(v);
    }
    s += q.weights[a] * row;
    sa += q.weights[a] * row_abs;
  }
  const double vol = std::pow(2 * std::numbers::pi, m - 2);
  return {s * vol, sa * vol};
}

}  // namespace detail

/// Options of a variation run.
struct VariationOptions {
  double epsilon = 1e-3;
  int panels = 8;       // coarse resolution; the fine one doubles it
  int max_panels = 64;  // refinement stops here
  double gate = 1e-8;
};

/// First variation of the integral of E_{m,n} on the torus metric
/// delta + a p in direction h, compared with the pairing against T^2_{m,n}
/// at the background metric.
inline VariationReport variation_experiment(int m, int n, const TrigTensor& p, double a, const TrigTensor& h,
                                            const VariationOptions& opt = {}) {
  if (n < 0 || n % 2 != 0) throw DomainError("weight must be even and non-negative");
  if (p.dim != m || h.dim != m) throw DomainError("tensor fields must live in dimension m");
  if (!(opt.epsilon > 0)) throw DomainError("epsilon must be positive");
  VariationReport rep;
  rep.m = m;
  rep.n = n;
  rep.epsilon = opt.epsilon;
  rep.background_amplitude = a;
  rep.panels = opt.panels;
  rep.background = p.describe();
  rep.perturbation = h.describe();
  const double epsilon = opt.epsilon;

  // Largest absolute integral of E seen by a difference quotient; bounds
  // its roundoff.
  double action_abs = 0;
  auto action = [&](const QuadratureRule& q, double eps) {
    const auto [v, va] = detail::torus_integral_abs(q, m, [&](double x1, double x2) {
      const auto pt = torus_point(p, a, h, eps, x1, x2);
      return pfaffian_direct(pt.curvature, n) * pt.density;
    });
    action_abs = std::max(action_abs, va);
    return v;
  };
  auto pairing = [&](const QuadratureRule& q) {
    return detail::torus_integral(q, m, [&](double x1, double x2) {
      const auto pt = torus_point(p, a, h, 0.0, x1, x2);
      const auto t = t2_direct(pt.curvature, n);
      double s = 0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) s += t(i, j) * pt.h_frame(i, j);
      return s * pt.density;
    });
  };
  auto magnitude = [&](const QuadratureRule& q) {
    return detail::torus_integral(q, m, [&](double x1, double x2) {
      const auto pt = torus_point(p, a, h, 0.0, x1, x2);
      return std::abs(pfaffian_direct(pt.curvature, n)) * pt.density;
    });
  };
  auto derivatives = [&](const QuadratureRule& q, double& d1, double& d2) {
    d1 = (action(q, epsilon) - action(q, -epsilon)) / (2 * epsilon);
    d2 = (action(q, epsilon / 2) - action(q, -epsilon / 2)) / epsilon;
  };

  int panels = opt.panels;
  double c1, c2, f1, f2;
  derivatives(QuadratureRule::composite(panels), c1, c2);
  double pc = pairing(QuadratureRule::composite(panels));
  double pf = 0, denom = 0;
  for (;;) {
    const auto fine = QuadratureRule::composite(2 * panels);
    derivatives(fine, f1, f2);
    pf = pairing(fine);
    rep.scale = magnitude(fine) * h.max_abs();
    // Magnitude of both sides; below 1e-12 everything counts as zero.
    denom = std::max({rep.scale, std::abs(pf), std::abs(f1), 1e-12});
    const double noise = 1e3 * std::numeric_limits<double>::epsilon() * action_abs / epsilon;
    rep.quadrature_residual = std::max(std::max(std::abs(f2 - c2) - noise, 0.0), std::abs(pf - pc)) / denom;
    if (rep.quadrature_residual <= opt.gate) break;
    if (2 * panels >= opt.max_panels) {
      std::ostringstream os;
      os << "quadrature did not converge: relative change " << rep.quadrature_residual << " between " << panels
         << " and " << 2 * panels << " panels exceeds " << opt.gate;
      throw NumericalError(os.str());
    }
    panels *= 2;
    c1 = f1;
    c2 = f2;
    pc = pf;
  }
  rep.panels = panels;
  rep.derivative_eps = f1;
  rep.derivative_half = f2;
  rep.derivative = (4 * f2 - f1) / 3;
  rep.pairing = pf;
  rep.refinement_residual = std::abs(rep.derivative - f2) / denom;
  if (std::abs(pf) > 1e-8 * denom) rep.d = rep.derivative / pf;
  return rep;
}

/// Seeded run: background p and direction h are random trigonometric fields
/// drawn from the seed, background amplitude 0.2.
inline VariationReport euler_lagrange_check(int m, int n, std::uint64_t seed, double epsilon = 1e-3) {
  if (n != 2 && n != 4) throw DomainError("variation runs support n in {2, 4}");
  if (m != n && m != n + 1) throw DomainError("variation runs support m in {n, n + 1}");
  const auto p = TrigTensor::random(m, seed * 2 + 1);
  const auto h = TrigTensor::random(m, seed * 2 + 2);
  VariationOptions opt;
  opt.epsilon = epsilon;
  auto rep = variation_experiment(m, n, p, 0.2, h, opt);
  rep.seed = seed;
  return rep;
}

}  // namespace curvid
