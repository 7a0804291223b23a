#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace curvid {

using Rational = mpq_class;
using Integer = mpz_class;

/// Deterministic pseudo-random source shared by all samplers.
using Rng = std::mt19937_64;

/// Uniform rational num/den with |num| <= bound and den in {1, 2, 3}.
inline Rational random_small_rational(Rng& rng, int bound) {
  if (bound <= 0) return Rational(0);
  std::uniform_int_distribution<int> num(-bound, bound);
  std::uniform_int_distribution<int> den(1, 3);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline double to_double(const Rational& q) { return q.get_d(); }

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

/// Scales v to the primitive integer vector with positive leading entry.
inline std::vector<Integer> primitive_integer_vector(const std::vector<Rational>& v) {
  Integer l = 1;
  for (const auto& x : v) {
    if (sgn(x) != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
  }
  std::vector<Integer> out;
  out.reserve(v.size());
  Integer g = 0;
  for (const auto& x : v) {
    Integer n = x.get_num() * (l / x.get_den());
    out.push_back(n);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  }
  if (g == 0) return out;
  int lead = 0;
  for (const auto& n : out) {
    if (n != 0) {
      lead = sgn(n);
      break;
    }
  }
  for (auto& n : out) {
    n /= g;
    if (lead < 0) n = -n;
  }
  return out;
}

}  // namespace curvid
