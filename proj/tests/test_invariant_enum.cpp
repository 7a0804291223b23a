#include <gtest/gtest.h>

#include <algorithm>

#include "curvid/enumerate.hpp"
#include "curvid/identity_lab.hpp"

using namespace curvid;

namespace {

bool contains(const SpanningSet& s, std::string_view text) {
  const auto key = canonicalize(parse_monomial(text)).first;
  return std::find(s.elements.begin(), s.elements.end(), key) != s.elements.end();
}

}  // namespace

TEST(InvariantEnum, SmallSets) {
  const auto s0 = enumerate_spanning_set(0, Valence::scalar);
  ASSERT_EQ(s0.size(), 1u);
  EXPECT_EQ(s0.elements[0], Monomial{});
  const auto s2 = enumerate_spanning_set(2, Valence::scalar);
  ASSERT_EQ(s2.size(), 1u);
  EXPECT_TRUE(contains(s2, "R[a,b,b,a]"));
  const auto t2 = enumerate_spanning_set(2, Valence::sym2);
  EXPECT_EQ(t2.size(), 2u);
  EXPECT_TRUE(contains(t2, "R[a,b,b,a] s2[c,c]"));
  EXPECT_TRUE(contains(t2, "R[k,i,j,k] s2[i,j]"));
}

TEST(InvariantEnum, ContainsLemmaMonomials) {
  const auto s4 = enumerate_spanning_set(4, Valence::scalar);
  for (const char* m : {"R[i,j,j,i] R[k,l,l,k]", "R[a,i,j,a] R[b,i,j,b]", "R[i,j,k,l] R[i,j,k,l]", "R[a,b,b,a;c,c]"})
    EXPECT_TRUE(contains(s4, m)) << m;
  const auto s6 = curvature_only(enumerate_spanning_set(6, Valence::scalar));
  EXPECT_EQ(s6.size(), 13u);
  EXPECT_EQ(independent_subset(s6, 7).size(), 8u);
  const auto t4 = enumerate_spanning_set(4, Valence::sym2);
  for (const char* m : {"R[k,l,n,i] R[k,l,n,j] s2[i,j]", "R[k,n,i,k] R[l,n,j,l] s2[i,j]", "R[a,b,b,a] R[c,d,d,c] s2[e,e]"})
    EXPECT_TRUE(contains(t4, m)) << m;
}

TEST(InvariantEnum, IndependentOfShuffleSeed) {
  for (auto v : {Valence::scalar, Valence::sym2})
    for (int n : {2, 4}) {
      const auto ref = enumerate_spanning_set(n, v);
      for (std::uint64_t seed : {7u, 99u, 12345u})
        EXPECT_EQ(enumerate_spanning_set(n, v, 2, 3, seed).elements, ref.elements);
    }
}

TEST(InvariantEnum, ElementsAreCanonicalAndNonzero) {
  for (auto v : {Valence::scalar, Valence::sym2})
    for (int n : {2, 4, 6}) {
      const auto s = enumerate_spanning_set(n, v, n == 6 ? 0 : 2);
      for (const auto& m : s.elements) {
        auto [k, sign] = canonicalize(m);
        EXPECT_EQ(k, m);
        EXPECT_EQ(sign, 1);
        EXPECT_EQ(m.weight(), n);
        EXPECT_EQ(m.valence(), v);
      }
    }
}

TEST(InvariantEnum, Expansions) {
  EXPECT_EQ(pfaffian_expand(0), InvariantPolynomial::one());
  EXPECT_EQ(pfaffian_expand(2), parse_polynomial("2 R[a,b,b,a]"));
  EXPECT_EQ(pfaffian_expand(4),
            parse_polynomial("4 R[i,j,j,i] R[k,l,l,k] - 16 R[a,i,j,a] R[b,i,j,b] + 4 R[i,j,k,l] R[i,j,k,l]"));
  EXPECT_EQ(to_string(pfaffian_expand(2)), "2 R[a,b,b,a]");
  EXPECT_EQ(t2_expand(0), parse_polynomial("s2[a,a]"));
  const auto t2 = t2_expand(2);
  EXPECT_EQ(t2.coefficient(parse_monomial("R[a,b,b,a] s2[c,c]")), 2);
  EXPECT_EQ(t2.coefficient(parse_monomial("R[k,i,j,k] s2[i,j]")), -4);
  EXPECT_EQ(t2.size(), 2u);
}

TEST(InvariantEnum, Errors) {
  EXPECT_THROW(enumerate_spanning_set(3, Valence::scalar), CapabilityError);
  EXPECT_THROW(enumerate_spanning_set(8, Valence::scalar), CapabilityError);
  EXPECT_THROW(pfaffian_expand(5), CapabilityError);
  EXPECT_THROW(pfaffian_expand(8), CapabilityError);
  EXPECT_THROW(t2_expand(3), CapabilityError);
  EXPECT_THROW(SpanningSet::from_monomials({parse_monomial("R[a,b,b,a]"), parse_monomial("R[c,d,d,c]")}),
               StructuralError);
  EXPECT_THROW(SpanningSet::from_monomials({parse_monomial("R[a,a,b,b]")}), StructuralError);
}

TEST(InvariantEnum, FromMonomialsKeepsOrderAndSigns) {
  const auto s = SpanningSet::from_monomials({parse_monomial("R[i,j,j,i] s2[k,k]"), parse_monomial("R[i,j,k,i] s2[j,k]")});
  EXPECT_EQ(s.elements[1], parse_monomial("R[i,j,k,i] s2[j,k]"));
  EXPECT_EQ(s.valence, Valence::sym2);
  EXPECT_EQ(s.weight, 2);
}
