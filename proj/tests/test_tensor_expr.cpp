#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "curvid/enumerate.hpp"
#include "curvid/monomial.hpp"
#include "curvid/polynomial.hpp"

using namespace curvid;

namespace {

Monomial mono(std::string_view s) { return parse_monomial(s); }

InvariantPolynomial poly(std::string_view s) { return parse_polynomial(s); }

// Random relabeling, factor shuffle and slot symmetries; returns the sign
// picked up from the slot symmetries.
int scramble(Monomial& m, Rng& rng) {
  int maxl = 0;
  for (const auto& f : m.factors)
    for (int l : f.labels) maxl = std::max(maxl, l + 1);
  std::vector<int> relabel(static_cast<std::size_t>(maxl));
  std::iota(relabel.begin(), relabel.end(), 100);
  std::shuffle(relabel.begin(), relabel.end(), rng);
  int sign = 1;
  std::uniform_int_distribution<int> pick8(0, 7), pick2(0, 1);
  for (auto& f : m.factors) {
    for (auto& l : f.labels) l = relabel[static_cast<std::size_t>(l)];
    if (f.is_free_marker()) {
      if (pick2(rng)) std::swap(f.labels[0], f.labels[1]);
      continue;
    }
    const auto& s = detail::kCurvatureSymmetries[static_cast<std::size_t>(pick8(rng))];
    std::vector<int> nl = f.labels;
    for (int q = 0; q < 4; ++q) nl[static_cast<std::size_t>(q)] = f.labels[static_cast<std::size_t>(s.perm[static_cast<std::size_t>(q)])];
    f.labels = nl;
    sign *= s.sign;
  }
  std::shuffle(m.factors.begin(), m.factors.end(), rng);
  return sign;
}

}  // namespace

TEST(TensorExpr, RoundTripGrammar) {
  for (const char* s : {"R[a,b,b,a]", "R[a,b,c,d;e] R[a,b,c,d;e]", "R[k,i,j,k] s2[i,j]", "R[a,b,b,a;c,c]", "1"}) {
    const auto m = mono(s);
    const auto printed = to_string(m);
    EXPECT_EQ(mono(printed), m) << s;
    EXPECT_EQ(canonicalize(mono(printed)).first, canonicalize(m).first);
  }
  const auto p = poly("2 R[a,b,b,a] R[c,d,d,c] - 8 R[a,b,c,a] R[d,b,c,d] + 1/2 R[a,b,c,d] R[a,b,c,d]");
  EXPECT_EQ(parse_polynomial(to_string(p)), p);
}

TEST(TensorExpr, CanonicalizeExamples) {
  auto [k1, s1] = canonicalize(mono("R[a,b,b,a]"));
  auto [k2, s2] = canonicalize(mono("R[i,j,j,i]"));
  EXPECT_EQ(k1, k2);
  EXPECT_EQ(s1, 1);
  EXPECT_EQ(s2, 1);
  auto [k3, s3] = canonicalize(mono("R[b,a,b,a]"));
  EXPECT_EQ(k3, k1);
  EXPECT_EQ(s3, -1);
  auto [k4, s4] = canonicalize(mono("R[i,j,k,l] R[i,j,k,l]"));
  auto [k5, s5] = canonicalize(mono("R[p,q,r,s] R[p,q,r,s]"));
  Monomial swapped = mono("R[i,j,k,l] R[i,j,k,l]");
  std::swap(swapped.factors[0], swapped.factors[1]);
  EXPECT_EQ(k4, k5);
  EXPECT_EQ(canonicalize(swapped).first, k4);
  EXPECT_EQ(s4, 1);
  EXPECT_EQ(s5, 1);
}

TEST(TensorExpr, VanishingBySymmetry) {
  EXPECT_EQ(canonicalize(mono("R[a,a,b,b]")).second, 0);
  EXPECT_EQ(canonicalize(mono("R[a,a,b,c;b,c]")).second, 0);
  EXPECT_NE(canonicalize(mono("R[a,b,b,a] R[c,d,d,c]")).second, 0);
}

TEST(TensorExpr, MalformedPairing) {
  EXPECT_THROW(parse_monomial("R[a,b,b,c]"), StructuralError);
  EXPECT_THROW(parse_monomial("R[a,a,a,b] R[b,c,c,d]"), StructuralError);
  EXPECT_THROW(parse_monomial("R[a,b,c]"), ParseError);
  EXPECT_THROW(parse_monomial("Q[a,b,b,a]"), ParseError);
  Monomial bad;
  bad.factors.push_back(Factor::curvature({0, 1, 1, 2}));
  EXPECT_THROW(canonicalize(bad), StructuralError);
}

TEST(TensorExpr, IdempotentAndRelabelInvariant) {
  std::vector<Monomial> ms;
  for (auto v : {Valence::scalar, Valence::sym2})
    for (int n : {2, 4}) {
      const auto s = enumerate_spanning_set(n, v);
      ms.insert(ms.end(), s.elements.begin(), s.elements.end());
    }
  const auto s6 = curvature_only(enumerate_spanning_set(6, Valence::scalar, 0));
  ms.insert(ms.end(), s6.elements.begin(), s6.elements.end());
  Rng rng(2024);
  for (const auto& key : ms) {
    auto [again, sign] = canonicalize(key);
    ASSERT_EQ(again, key);
    ASSERT_EQ(sign, 1);
    for (int t = 0; t < 10000; ++t) {
      Monomial m = key;
      const int applied = scramble(m, rng);
      auto [k, s] = canonicalize(m);
      ASSERT_EQ(k, key) << to_string(m);
      ASSERT_EQ(s, applied) << to_string(m);
    }
  }
}

TEST(TensorExpr, OddSwapsFlipSignOnce) {
  const auto base = mono("R[a,b,c,b] R[d,e,e,c] R[f,d,f,a]");
  const auto [key, sign] = canonicalize(base);
  ASSERT_NE(sign, 0);
  Rng rng(5);
  std::uniform_int_distribution<int> fac(0, 2), which(0, 1);
  for (int t = 0; t < 200; ++t) {
    Monomial m = base;
    const int swaps = 2 * (t % 3) + 1;
    for (int q = 0; q < swaps; ++q) {
      auto& f = m.factors[static_cast<std::size_t>(fac(rng))];
      if (which(rng))
        std::swap(f.labels[0], f.labels[1]);
      else
        std::swap(f.labels[2], f.labels[3]);
    }
    auto [k, s] = canonicalize(m);
    EXPECT_EQ(k, key);
    EXPECT_EQ(s, -sign);
  }
}

TEST(TensorExpr, PolynomialExamples) {
  const auto tau = poly("R[a,b,b,a]");
  EXPECT_TRUE((tau + tau * Rational(-1)).is_zero());
  const auto tau2 = poly_mul(tau, tau);
  EXPECT_EQ(tau2.weight(), 4);
  EXPECT_EQ(tau2.size(), 1u);
  EXPECT_EQ(tau2.coefficient(mono("R[i,j,j,i] R[k,l,l,k]")), 1);
  const auto gb = poly("R[i,j,j,i] R[k,l,l,k] - 4 R[a,i,j,a] R[b,i,j,b] + R[i,j,k,l] R[i,j,k,l]");
  const auto twice = poly_scale(gb, 2);
  EXPECT_EQ(twice.coefficient(mono("R[i,j,j,i] R[k,l,l,k]")), 2);
  EXPECT_EQ(twice.coefficient(mono("R[a,i,j,a] R[b,i,j,b]")), -8);
  EXPECT_EQ(twice.coefficient(mono("R[i,j,k,l] R[i,j,k,l]")), 2);
}

TEST(TensorExpr, ArithmeticErrors) {
  const auto tau = poly("R[a,b,b,a]");
  const auto g = poly("s2[a,a]");
  const auto tau2 = poly("R[a,b,b,a] R[c,d,d,c]");
  EXPECT_THROW(poly_add(tau, tau2), ArithmeticError);
  EXPECT_THROW(poly_add(tau, poly("R[a,b,b,a] s2[c,c]")), ArithmeticError);
  EXPECT_THROW(poly_mul(g, g), ArithmeticError);
  EXPECT_EQ(poly_mul(tau, g).valence(), Valence::sym2);
}

TEST(TensorExpr, RingAxioms) {
  const auto s2 = enumerate_spanning_set(2, Valence::scalar, 0);
  const auto s4 = curvature_only(enumerate_spanning_set(4, Valence::scalar, 0));
  Rng rng(11);
  auto random_poly = [&](const SpanningSet& s) {
    InvariantPolynomial p(Valence::scalar, s.weight);
    for (const auto& m : s.elements) p.add_term(m, random_small_rational(rng, 9));
    return p;
  };
  for (int t = 0; t < 20; ++t) {
    const auto a = random_poly(s2), b = random_poly(s2), c = random_poly(s2);
    const auto d = random_poly(s4), e = random_poly(s4);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(d * (a + b), d * a + d * b);
    EXPECT_EQ((d * e).weight(), 8);
    EXPECT_EQ((a * d).weight(), a.weight() + d.weight());
    EXPECT_EQ(a * InvariantPolynomial::one(), a);
    EXPECT_EQ(poly_scale(d + e, Rational(3, 2)), poly_scale(d, Rational(3, 2)) + poly_scale(e, Rational(3, 2)));
  }
}

TEST(TensorExpr, DegreeProfile) {
  const auto tau = mono("R[a,b,b,a]");
  const std::vector<int> assign{0, 1};
  EXPECT_EQ(degree_profile(tau, 0, assign), 2);
  EXPECT_EQ(degree_profile(tau, 1, assign), 2);
  EXPECT_EQ(degree_profile(tau, 2, assign), 0);
  const auto g = mono("R[a,b,b,a] s2[c,c]");
  EXPECT_EQ(degree_profile(g, 2, {0, 1, 2}), 2);

  // Lemma 1.2(2) kernel monomials in dim 3: every index has even degree.
  Rng rng(3);
  std::uniform_int_distribution<int> idx(0, 2);
  for (const char* s : {"R[i,j,j,i] R[k,l,l,k]", "R[a,i,j,a] R[b,i,j,b]", "R[i,j,k,l] R[i,j,k,l]"}) {
    const auto m = canonicalize(mono(s)).first;
    for (int t = 0; t < 50; ++t) {
      std::vector<int> a(static_cast<std::size_t>(label_count(m)));
      for (auto& x : a) x = idx(rng);
      for (int k = 0; k < 3; ++k) EXPECT_EQ(degree_profile(m, k, a) % 2, 0);
    }
  }
}
