#include <gtest/gtest.h>

#include <fstream>

#include "curvid/identity_lab.hpp"
#include "curvid/json_io.hpp"
#include "curvid/lemmas.hpp"

using namespace curvid;

namespace {

Json load_golden(const std::string& name) {
  std::ifstream in(std::string(CURVID_GOLDEN_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing golden file " + name);
  return Json::parse(in);
}

SpanningSet lemma_columns(std::string_view id) { return SpanningSet::from_monomials(find_lemma(id).columns); }

std::vector<Integer> ints(std::initializer_list<long> v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(Linalg, RankNullspaceDeterminant) {
  RationalMatrix a{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  EXPECT_EQ(rank(a), 2u);
  const auto ns = nullspace(a, 3);
  ASSERT_EQ(ns.size(), 1u);
  EXPECT_EQ(primitive_integer_vector(ns[0]), ints({1, 1, -1}));
  EXPECT_EQ(determinant(a), 0);
  EXPECT_EQ(determinant({{2, 1}, {1, 1}}), 1);
  EXPECT_EQ(determinant({{0, 1}, {1, 0}}), -1);
  RowEchelon e(2);
  EXPECT_TRUE(e.add({Rational(1, 2), 1}));
  EXPECT_FALSE(e.add({1, 2}));
  EXPECT_THROW(e.add({1}), DomainError);
  EXPECT_EQ(e.reduced(), (RationalMatrix{{1, 2}}));
}

TEST(IdentityLab, VanishingExamples) {
  const auto& l22 = find_lemma("1.2.2");
  EXPECT_TRUE(vanishing_test(l22.polynomial, 3, 40));
  EXPECT_FALSE(vanishing_test(l22.polynomial, 4, 40));
  EXPECT_TRUE(vanishing_test(find_lemma("1.2.1").polynomial, 1, 20));
  EXPECT_FALSE(vanishing_test(find_lemma("1.2.1").polynomial, 2, 20));
  EXPECT_TRUE(vanishing_test(find_lemma("1.4.1").polynomial, 2, 20));
  EXPECT_FALSE(vanishing_test(find_lemma("1.4.1").polynomial, 3, 20));
  EXPECT_THROW(vanishing_test(l22.polynomial, 3, 10), InconclusiveError);
  // Derivative monomials force jet samples.
  EXPECT_FALSE(vanishing_test(parse_polynomial("R[a,b,b,a;c,c]"), 3, 20));
}

TEST(IdentityLab, KernelExamples) {
  const auto rep = kernel_basis(lemma_columns("1.2.2"), 3, 100);
  ASSERT_EQ(rep.kernel_dimension(), 1u);
  EXPECT_EQ(rep.primitive_basis()[0], ints({1, -4, 1}));
  EXPECT_EQ(rep.polynomial(0), find_lemma("1.2.2").polynomial);
  EXPECT_EQ(rep.samples, 100u);
  EXPECT_EQ(rep.sampler, "algebraic");
  EXPECT_EQ(kernel_basis(lemma_columns("1.2.2"), 4, 100).kernel_dimension(), 0u);

  const auto r41 = kernel_basis(lemma_columns("1.4.1"), 2, 100);
  ASSERT_EQ(r41.kernel_dimension(), 1u);
  EXPECT_EQ(r41.primitive_basis()[0], ints({1, -2}));
  EXPECT_EQ(kernel_basis(lemma_columns("1.4.1"), 3, 100).kernel_dimension(), 0u);

  EXPECT_THROW(kernel_basis(lemma_columns("1.2.2"), 3, 5), InconclusiveError);
}

TEST(IdentityLab, SeedRobustness) {
  for (std::uint64_t seed : {2u, 7u, 1234u}) {
    const auto rep = kernel_basis(lemma_columns("1.2.2"), 3, 60, {seed, Sampler::automatic});
    ASSERT_EQ(rep.kernel_dimension(), 1u);
    EXPECT_EQ(rep.primitive_basis()[0], ints({1, -4, 1}));
    const auto jet = kernel_basis(lemma_columns("1.2.2"), 3, 60, {seed, Sampler::jet});
    ASSERT_EQ(jet.kernel_dimension(), 1u);
    EXPECT_EQ(jet.primitive_basis()[0], ints({1, -4, 1}));
  }
}

TEST(IdentityLab, SolveCoefficients) {
  const auto s2 = enumerate_spanning_set(2, Valence::scalar);
  EXPECT_EQ(solve_coefficients(pfaffian_target(2), s2, 3, 10), (RationalVector{2}));

  const auto s4 = lemma_columns("1.2.2");
  const auto v4 = solve_coefficients(pfaffian_target(4), s4, 5, 30);
  EXPECT_EQ(v4, (RationalVector{4, -16, 4}));
  InvariantPolynomial combo(Valence::scalar, 4);
  for (std::size_t i = 0; i < s4.size(); ++i) combo.add_term(s4.elements[i], v4[i]);
  EXPECT_TRUE((combo - pfaffian_expand(4)).is_zero());

  const auto t = lemma_columns("1.4.1");
  EXPECT_EQ(solve_coefficients(t2_target(2), t, 3, 10), (RationalVector{2, -4}));

  // tau alone cannot produce |R|^2.
  EXPECT_THROW(solve_coefficients(polynomial_target(parse_polynomial("R[a,b,c,d] R[a,b,c,d]")),
                                  SpanningSet::from_monomials({parse_monomial("R[a,b,b,a] R[c,d,d,c]")}), 4, 10),
               InconsistentSystemError);
  // In dim 3 the three quadratic invariants are dependent.
  EXPECT_THROW(solve_coefficients(pfaffian_target(4), s4, 3, 30), InconclusiveError);
  EXPECT_THROW(solve_coefficients(pfaffian_target(4), s4, 5, 3), InconclusiveError);
}

TEST(IdentityLab, IndependentSubsetAndExpressIn) {
  const auto full = enumerate_spanning_set(4, Valence::scalar);
  const auto basis = independent_subset(full, 5);
  EXPECT_EQ(basis.size(), 4u);
  EXPECT_EQ(curvature_only(basis).size(), 3u);
  const auto v = express_in(pfaffian_expand(4), basis, 5);
  InvariantPolynomial combo(Valence::scalar, 4);
  for (std::size_t i = 0; i < basis.size(); ++i) combo.add_term(basis.elements[i], v[i]);
  EXPECT_TRUE(vanishing_test(combo - pfaffian_expand(4), 5, 20));

  const auto sym = independent_subset(enumerate_spanning_set(2, Valence::sym2), 4);
  EXPECT_EQ(sym.size(), 2u);
}

TEST(IdentityLab, Proportional) {
  EXPECT_TRUE(proportional({1, -4, 1}, {Rational(-1, 2), 2, Rational(-1, 2)}));
  EXPECT_FALSE(proportional({1, -4, 1}, {1, 4, 1}));
  EXPECT_FALSE(proportional({0, 0}, {0, 0}));
  EXPECT_FALSE(proportional({1}, {1, 0}));
}

TEST(IdentityLab, CriticalDegreeProfile) {
  const auto rep = kernel_basis(lemma_columns("1.2.2"), 3, 60);
  // Weight-n monomials use n labels; each index value occurs twice.
  for (const auto& m : rep.columns) EXPECT_TRUE(has_critical_degree_profile(canonicalize(m).first, 4));
  EXPECT_TRUE(has_critical_degree_profile(canonicalize(parse_monomial("R[i,j,k,i] s2[j,k]")).first, 3));
  EXPECT_FALSE(has_critical_degree_profile(canonicalize(parse_monomial("R[a,b,b,a;c,c]")).first, 3));
  EXPECT_FALSE(has_critical_degree_profile(canonicalize(parse_monomial("R[a,b,b,a]")).first, 3));
}

TEST(IdentityLab, GramRelation) {
  for (int m : {1, 2, 3, 5})
    for (std::uint64_t s = 1; s <= 5; ++s) {
      const auto g = gram_relation_check(m, s);
      EXPECT_TRUE(g.relation_holds());
      EXPECT_TRUE(g.minor_nonzero());
    }
  EXPECT_THROW(gram_relation_check(0, 1), DomainError);
}

TEST(IdentityLab, LemmaCatalog) {
  EXPECT_EQ(lemma_catalog().size(), 5u);
  EXPECT_THROW(find_lemma("9.9"), DomainError);
  for (const auto& l : lemma_catalog()) {
    if (l.columns.empty()) continue;
    InvariantPolynomial p(l.polynomial.valence(), l.polynomial.weight());
    for (std::size_t i = 0; i < l.columns.size(); ++i) p.add_term(l.columns[i], l.kernel_vector[i]);
    EXPECT_EQ(p, l.polynomial) << l.id;
  }
}

TEST(IdentityLab, Lemma142VanishesOnlyInDim4) {
  const auto& p = find_lemma("1.4.2").polynomial;
  EXPECT_TRUE(vanishing_test(p, 4, 20));
  EXPECT_FALSE(vanishing_test(p, 5, 20));
}

TEST(Golden, KernelReports) {
  for (const char* name : {"lemma_1_2_2_dim3.json", "lemma_1_4_1_dim2.json", "lemma_1_4_2_dim4.json"}) {
    const auto golden = kernel_report_from_json(load_golden(name));
    const auto s = SpanningSet::from_monomials(golden.columns);
    const auto rep = kernel_basis(s, golden.dim, golden.samples, {1, Sampler::automatic});
    EXPECT_EQ(rep.basis, golden.basis) << name;
    EXPECT_EQ(rep.seeds, golden.seeds) << name;
    EXPECT_EQ(to_json(rep), load_golden(name)) << name;
  }
}

TEST(Golden, PinnedVectors) {
  const auto r22 = kernel_report_from_json(load_golden("lemma_1_2_2_dim3.json"));
  EXPECT_EQ(r22.primitive_basis(), (std::vector<std::vector<Integer>>{ints({1, -4, 1})}));
  const auto r41 = kernel_report_from_json(load_golden("lemma_1_4_1_dim2.json"));
  EXPECT_EQ(r41.primitive_basis(), (std::vector<std::vector<Integer>>{ints({1, -2})}));
  const auto r42 = kernel_report_from_json(load_golden("lemma_1_4_2_dim4.json"));
  ASSERT_EQ(r42.kernel_dimension(), 1u);
  EXPECT_EQ(r42.primitive_basis()[0], ints({1, -4, -8, 4, 2, 4, 8, 0, 0, 0}));
}

TEST(Golden, LemmaPolynomials) {
  EXPECT_EQ(polynomial_from_json(load_golden("lemma_1_2_3_polynomial.json")), find_lemma("1.2.3").polynomial);
  EXPECT_EQ(polynomial_from_json(load_golden("lemma_1_4_2_polynomial.json")), find_lemma("1.4.2").polynomial);
}

TEST(JsonIo, RoundTrips) {
  const Rational q(-7, 3);
  EXPECT_EQ(rational_from_json(to_json(q)), q);
  EXPECT_THROW(rational_from_json(Json::array({1, 0})), ParseError);
  const auto c = curvature_from_jet(random_metric_jet(3, 3, 4), 1);
  EXPECT_EQ(curvature_from_json(to_json(c)), c);
  const auto rep = kernel_basis(lemma_columns("1.2.2"), 3, 30);
  const auto back = kernel_report_from_json(to_json(rep));
  EXPECT_EQ(back.basis, rep.basis);
  EXPECT_EQ(back.columns, rep.columns);
}
