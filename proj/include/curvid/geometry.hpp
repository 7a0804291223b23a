#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "curvid/curvature.hpp"
#include "curvid/errors.hpp"
#include "curvid/evaluate.hpp"
#include "curvid/rational.hpp"

namespace curvid {

/// Exact number coeff * pi^power.
struct PiMultiple {
  Rational coeff = 0;
  int power = 0;

  double to_double() const { return coeff.get_d() * std::pow(std::numbers::pi, power); }

  friend PiMultiple operator*(const PiMultiple& a, const PiMultiple& b) {
    return {a.coeff * b.coeff, a.power + b.power};
  }
  friend PiMultiple operator*(const PiMultiple& a, const Rational& s) { return {a.coeff * s, a.power}; }
  friend PiMultiple operator/(const PiMultiple& a, const PiMultiple& b) {
    if (is_zero(b.coeff)) throw DomainError("division by zero");
    return {a.coeff / b.coeff, a.power - b.power};
  }
  friend bool operator==(const PiMultiple& a, const PiMultiple& b) {
    if (is_zero(a.coeff) && is_zero(b.coeff)) return true;
    return a.coeff == b.coeff && a.power == b.power;
  }
};

inline std::string to_string(const PiMultiple& p) {
  if (p.power == 0 || is_zero(p.coeff)) return to_string(p.coeff);
  std::string s = to_string(p.coeff) + " pi";
  if (p.power != 1) s += "^" + std::to_string(p.power);
  return s;
}

/// Round spheres, Riemannian products of models, and flat tori.
struct ModelGeometry {
  enum class Kind { sphere, product, torus };

  Kind kind = Kind::sphere;
  int sphere_dim = 0;
  Rational radius = 1;
  int torus_dim = 0;
  std::vector<ModelGeometry> factors;

  static ModelGeometry sphere(int p, Rational r = 1) {
    if (p < 1) throw DomainError("sphere dimension must be positive");
    if (sgn(r) <= 0) throw DomainError("sphere radius must be positive");
    ModelGeometry g;
    g.kind = Kind::sphere;
    g.sphere_dim = p;
    g.radius = r;
    return g;
  }

  static ModelGeometry product(std::vector<ModelGeometry> fs) {
    if (fs.empty()) throw DomainError("empty product");
    ModelGeometry g;
    g.kind = Kind::product;
    g.factors = std::move(fs);
    return g;
  }

  static ModelGeometry flat_torus(int m) {
    if (m < 1) throw DomainError("torus dimension must be positive");
    ModelGeometry g;
    g.kind = Kind::torus;
    g.torus_dim = m;
    return g;
  }

  int dim() const {
    switch (kind) {
      case Kind::sphere: return sphere_dim;
      case Kind::torus: return torus_dim;
      default: {
        int d = 0;
        for (const auto& f : factors) d += f.dim();
        return d;
      }
    }
  }

  int euler_characteristic() const {
    switch (kind) {
      case Kind::sphere: return sphere_dim % 2 == 0 ? 2 : 0;
      case Kind::torus: return 0;
      default: {
        int chi = 1;
        for (const auto& f : factors) chi *= f.euler_characteristic();
        return chi;
      }
    }
  }

  /// Riemannian volume; tori use the period 2 pi in every direction.
  PiMultiple volume() const {
    switch (kind) {
      case Kind::sphere: {
        // vol S^p(r) = 2 pi^((p+1)/2) / Gamma((p+1)/2) r^p
        const int p = sphere_dim;
        Rational rp = 1;
        for (int i = 0; i < p; ++i) rp *= radius;
        if (p % 2 == 1) {
          const int k = (p - 1) / 2;
          Integer kf = 1;
          for (int i = 2; i <= k; ++i) kf *= i;
          return {Rational(2) / Rational(kf) * rp, k + 1};
        }
        const int k = p / 2;
        Integer num = 2, den = 1;
        for (int i = 0; i < k; ++i) num *= 4;
        for (int i = 2; i <= k; ++i) num *= i;
        for (int i = 2; i <= 2 * k; ++i) den *= i;
        Rational c(num, den);
        c.canonicalize();
        return {c * rp, k};
      }
      case Kind::torus: {
        Rational c = 1;
        for (int i = 0; i < torus_dim; ++i) c *= 2;
        return {c, torus_dim};
      }
      default: {
        PiMultiple v{1, 0};
        for (const auto& f : factors) v = v * f.volume();
        return v;
      }
    }
  }

  std::string name() const {
    switch (kind) {
      case Kind::sphere: {
        std::string s = "S^" + std::to_string(sphere_dim);
        if (radius != 1) s += "(" + to_string(radius) + ")";
        return s;
      }
      case Kind::torus: return "T^" + std::to_string(torus_dim);
      default: {
        std::string s;
        for (const auto& f : factors) s += (s.empty() ? "" : " x ") + f.name();
        return s;
      }
    }
  }
};

namespace detail {

inline void fill_model_curvature(const ModelGeometry& g, CurvatureData<Rational>& c, int offset) {
  switch (g.kind) {
    case ModelGeometry::Kind::sphere: {
      const Rational kappa = 1 / (g.radius * g.radius);
      const int p = g.sphere_dim;
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
          if (i == j) continue;
          c(offset + i, offset + j, offset + j, offset + i) = kappa;
          c(offset + i, offset + j, offset + i, offset + j) = -kappa;
        }
      return;
    }
    case ModelGeometry::Kind::torus: return;
    default:
      for (const auto& f : g.factors) {
        fill_model_curvature(f, c, offset);
        offset += f.dim();
      }
  }
}

}  // namespace detail

/// Exact orthonormal-frame curvature of a model at a point. Spheres and
/// products are homogeneous, so the value is the same at every point; the
/// point only has to lie in the model (a coordinate vector of length dim).
inline CurvatureData<Rational> model_curvature(const ModelGeometry& g, const std::vector<Rational>& point = {}) {
  if (!point.empty() && static_cast<int>(point.size()) != g.dim())
    throw DomainError("point has " + std::to_string(point.size()) + " coordinates, model dimension is " +
                      std::to_string(g.dim()));
  CurvatureData<Rational> c(g.dim(), 0);
  detail::fill_model_curvature(g, c, 0);
  return c;
}

/// Closed form of the integral of E_{m,m} over a homogeneous model.
inline PiMultiple euler_integral(const ModelGeometry& g) {
  if (g.dim() % 2 != 0) throw DomainError("E_{m,m} is defined for even m");
  const Rational e = pfaffian_direct(model_curvature(g), g.dim());
  return g.volume() * e;
}

/// c_m with chi(M) = c_m * integral of E_{m,m}, computed on (S^2)^{m/2}.
inline PiMultiple gauss_bonnet_constant(int m) {
  if (m % 2 != 0) throw DomainError("chi(M) = 0 in odd dimension; no Gauss-Bonnet constant");
  if (m < 2 || m > 6) throw CapabilityError("Gauss-Bonnet constants are computed for m in {2, 4, 6}");
  std::vector<ModelGeometry> fs(static_cast<std::size_t>(m / 2), ModelGeometry::sphere(2));
  const auto model = m == 2 ? fs.front() : ModelGeometry::product(fs);
  return PiMultiple{model.euler_characteristic(), 0} / euler_integral(model);
}

}  // namespace curvid
