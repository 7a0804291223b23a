#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "curvid/curvature.hpp"
#include "curvid/enumerate.hpp"
#include "curvid/errors.hpp"
#include "curvid/evaluate.hpp"
#include "curvid/jet.hpp"
#include "curvid/linalg.hpp"
#include "curvid/polynomial.hpp"

namespace curvid {

/// Source of random curvature samples.
///
/// automatic: jets when derivative monomials are involved, algebraic
/// curvature tensors otherwise. mixed alternates algebraic and jet samples.
enum class Sampler { automatic, algebraic, jet, mixed };

inline std::string_view to_string(Sampler s) {
  switch (s) {
    case Sampler::algebraic: return "algebraic";
    case Sampler::jet: return "jet";
    case Sampler::mixed: return "mixed";
    default: return "automatic";
  }
}

struct SampleOptions {
  std::uint64_t seed = 1;
  Sampler sampler = Sampler::automatic;
};

/// One curvature sample. Jet samples carry max_deriv covariant derivatives.
inline CurvatureData<Rational> draw_sample(int m, int max_deriv, std::uint64_t seed, bool from_jet) {
  if (!from_jet) {
    if (max_deriv > 0) throw CapabilityError("algebraic samples carry no covariant derivatives");
    return random_algebraic_curvature(m, seed);
  }
  return curvature_from_jet(random_metric_jet(m, max_deriv + 2, seed), max_deriv);
}

namespace detail {

inline Sampler resolve(Sampler s, int max_deriv) {
  if (max_deriv > 0) return Sampler::jet;
  return s == Sampler::automatic ? Sampler::algebraic : s;
}

inline bool trial_uses_jet(Sampler s, std::size_t trial) {
  return s == Sampler::jet || (s == Sampler::mixed && trial % 2 == 1);
}

// Seeds of consecutive trials; deterministic in the base seed.
inline std::uint64_t trial_seed(std::uint64_t base, std::size_t trial) {
  return base * 1000003ULL + static_cast<std::uint64_t>(trial);
}

// Independent components of a sample value: one for scalars, the upper
// triangle (a <= b) for symmetric 2-tensors.
inline std::vector<Rational> components(const SymMatrix<Rational>& q) {
  std::vector<Rational> out;
  for (int a = 0; a < q.dim; ++a)
    for (int b = a; b < q.dim; ++b) out.push_back(q(a, b));
  return out;
}

inline std::vector<Rational> element_components(const Monomial& m, const CurvatureData<Rational>& c) {
  if (m.valence() == Valence::scalar) return {evaluate_monomial(m, c)};
  return components(evaluate_monomial_sym2(m, c));
}

inline int max_derivs(const SpanningSet& s) {
  int d = 0;
  for (const auto& m : s.elements) d = std::max(d, m.max_derivs());
  return d;
}

}  // namespace detail

/// Exact evaluations of spanning-set elements on random samples.
///
/// Each sample contributes one row per independent component: a single row
/// for scalar invariants, m(m+1)/2 rows (a <= b) for 2-tensor invariants.
/// Column c holds element c of the spanning set.
struct EvaluationMatrix {
  int dim = 0;
  Valence valence = Valence::scalar;
  std::vector<Monomial> columns;
  std::vector<std::uint64_t> seeds;
  std::vector<int> rows_per_sample;
  RationalMatrix rows;
};

inline EvaluationMatrix build_evaluation_matrix(const SpanningSet& s, int m, std::size_t trials,
                                                const SampleOptions& opt = {}) {
  EvaluationMatrix e;
  e.dim = m;
  e.valence = s.valence;
  e.columns = s.elements;
  const int k = detail::max_derivs(s);
  const Sampler sampler = detail::resolve(opt.sampler, k);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto seed = detail::trial_seed(opt.seed, t);
    const auto c = draw_sample(m, k, seed, detail::trial_uses_jet(sampler, t));
    std::vector<std::vector<Rational>> cols;
    for (const auto& mono : s.elements) cols.push_back(detail::element_components(mono, c));
    const std::size_t comps = s.valence == Valence::scalar ? 1 : static_cast<std::size_t>(m * (m + 1) / 2);
    for (std::size_t r = 0; r < comps; ++r) {
      RationalVector row(s.size());
      for (std::size_t q = 0; q < s.size(); ++q) row[q] = cols[q][r];
      e.rows.push_back(std::move(row));
    }
    e.seeds.push_back(seed);
    e.rows_per_sample.push_back(static_cast<int>(comps));
  }
  return e;
}

/// Exact nullspace of an evaluation matrix.
struct KernelReport {
  int dim = 0;
  int weight = 0;
  Valence valence = Valence::scalar;
  std::vector<Monomial> columns;
  RationalMatrix basis;  // reduced echelon form
  std::size_t samples = 0;
  std::vector<std::uint64_t> seeds;
  std::string sampler;

  std::size_t kernel_dimension() const { return basis.size(); }

  /// Basis vectors scaled to primitive integers (positive leading entry).
  std::vector<std::vector<Integer>> primitive_basis() const {
    std::vector<std::vector<Integer>> out;
    for (const auto& v : basis) out.push_back(primitive_integer_vector(v));
    return out;
  }

  /// Basis vector i as an invariant polynomial over the columns.
  InvariantPolynomial polynomial(std::size_t i) const {
    InvariantPolynomial p(valence, weight);
    for (std::size_t c = 0; c < columns.size(); ++c) p.add_term(columns[c], basis.at(i)[c]);
    return p;
  }
};

namespace detail {

inline RowEchelon stable_echelon(const EvaluationMatrix& e) {
  RowEchelon ech(e.columns.size());
  const std::size_t trials = e.rows_per_sample.size();
  std::size_t row = 0;
  std::size_t last_growth = 0;
  for (std::size_t t = 0; t < trials; ++t)
    for (int r = 0; r < e.rows_per_sample[t]; ++r)
      if (ech.add(e.rows[row++])) last_growth = t;
  if (2 * (last_growth + 1) > trials)
    throw InconclusiveError("rank was still growing at sample " + std::to_string(last_growth + 1) + " of " +
                            std::to_string(trials) + "; rerun with more trials");
  return ech;
}

}  // namespace detail

/// Nullspace over the spanning set of the dimension-m evaluation map.
///
/// Needs trials >= 3|s|. The rank must stop growing within the first half of
/// the samples; otherwise more trials are demanded.
inline KernelReport kernel_basis(const SpanningSet& s, int m, std::size_t trials, const SampleOptions& opt = {}) {
  if (s.size() == 0) throw StructuralError("empty spanning set");
  if (trials < 3 * s.size())
    throw InconclusiveError("kernel_basis needs at least " + std::to_string(3 * s.size()) + " trials, got " +
                            std::to_string(trials));
  const auto e = build_evaluation_matrix(s, m, trials, opt);
  const RowEchelon ech = detail::stable_echelon(e);
  KernelReport rep;
  rep.dim = m;
  rep.weight = s.weight;
  rep.valence = s.valence;
  rep.columns = s.elements;
  rep.basis = ech.nullspace();
  rep.samples = trials;
  rep.seeds = e.seeds;
  rep.sampler = std::string(to_string(detail::resolve(opt.sampler, detail::max_derivs(s))));
  return rep;
}

/// True iff p evaluates to exactly zero on every sample in dimension m.
/// Samples alternate between algebraic tensors and jets unless p carries
/// derivative monomials (then all samples are jets).
inline bool vanishing_test(const InvariantPolynomial& p, int m, std::size_t trials, const SampleOptions& opt = {}) {
  if (trials < 20) throw InconclusiveError("vanishing_test needs at least 20 trials");
  const int k = detail::max_derivs(p);
  Sampler sampler = opt.sampler == Sampler::automatic ? Sampler::mixed : opt.sampler;
  if (k > 0) sampler = Sampler::jet;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto c = draw_sample(m, k, detail::trial_seed(opt.seed, t), detail::trial_uses_jet(sampler, t));
    if (p.valence() == Valence::scalar) {
      if (!is_zero(evaluate(p, c))) return false;
    } else if (!evaluate_sym2(p, c).is_zero()) {
      return false;
    }
  }
  return true;
}

/// Exact evaluation oracle: independent components of a target invariant on
/// a sample (same layout as the evaluation matrix rows).
using TargetOracle = std::function<std::vector<Rational>(const CurvatureData<Rational>&)>;

inline TargetOracle pfaffian_target(int n) {
  return [n](const CurvatureData<Rational>& c) { return std::vector<Rational>{pfaffian_direct(c, n)}; };
}

inline TargetOracle t2_target(int n) {
  return [n](const CurvatureData<Rational>& c) { return detail::components(t2_direct(c, n)); };
}

inline TargetOracle polynomial_target(const InvariantPolynomial& p) {
  return [p](const CurvatureData<Rational>& c) {
    if (p.valence() == Valence::scalar) return std::vector<Rational>{evaluate(p, c)};
    return detail::components(evaluate_sym2(p, c));
  };
}

/// The unique v with sum_c v_c element_c = target on every sample.
inline RationalVector solve_coefficients(const TargetOracle& target, const SpanningSet& s, int m,
                                         std::size_t trials, const SampleOptions& opt = {}) {
  if (trials < 3 * s.size())
    throw InconclusiveError("solve_coefficients needs at least " + std::to_string(3 * s.size()) + " trials");
  const int k = detail::max_derivs(s);
  const Sampler sampler = detail::resolve(opt.sampler, k);
  const std::size_t n = s.size();
  RowEchelon ech(n + 1);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto c = draw_sample(m, k, detail::trial_seed(opt.seed, t), detail::trial_uses_jet(sampler, t));
    std::vector<std::vector<Rational>> cols;
    for (const auto& mono : s.elements) cols.push_back(detail::element_components(mono, c));
    const auto b = target(c);
    for (std::size_t r = 0; r < b.size(); ++r) {
      RationalVector row(n + 1);
      for (std::size_t q = 0; q < n; ++q) row[q] = cols[q].at(r);
      row[n] = -b[r];
      ech.add(row);
    }
  }
  const auto& piv = ech.pivots();
  if (!piv.empty() && piv.back() == n)
    throw InconsistentSystemError("target is not in the span of the spanning set (convention mismatch?)");
  if (ech.rank() < n)
    throw InconclusiveError("coefficients are underdetermined: rank " + std::to_string(ech.rank()) + " < " +
                            std::to_string(n) + "; use more trials or a larger dimension");
  const auto rref = ech.reduced();
  RationalVector v(n);
  for (std::size_t q = 0; q < rref.size(); ++q) v[piv[q]] = -rref[q][n];
  return v;
}

/// Columns of s that are linearly independent as invariants in dimension m,
/// chosen greedily with curvature-only monomials first. For m large enough
/// (m > n for scalars, m > n + 1 for 2-tensors) this is a basis of the
/// dimension-generic span.
inline SpanningSet independent_subset(const SpanningSet& s, int m, std::size_t trials = 0,
                                      const SampleOptions& opt = {}) {
  std::vector<Monomial> order = s.elements;
  std::stable_sort(order.begin(), order.end(),
                   [](const Monomial& a, const Monomial& b) { return a.max_derivs() < b.max_derivs(); });
  SpanningSet sorted = s;
  sorted.elements = order;
  if (trials == 0) trials = 3 * s.size();
  if (trials < 3 * s.size()) throw InconclusiveError("independent_subset needs at least 3|s| trials");
  const RowEchelon ech = detail::stable_echelon(build_evaluation_matrix(sorted, m, trials, opt));
  std::vector<bool> dependent(order.size(), true);
  for (auto p : ech.pivots()) dependent[p] = false;
  std::vector<Monomial> keep;
  for (std::size_t c = 0; c < order.size(); ++c)
    if (!dependent[c]) keep.push_back(order[c]);
  SpanningSet out = SpanningSet::from_monomials(keep);
  out.max_deriv = s.max_deriv;
  out.max_factors = s.max_factors;
  return out;
}

/// Coordinates of p over an independent spanning set, found by evaluation in
/// dimension m (where the set must be independent).
inline RationalVector express_in(const InvariantPolynomial& p, const SpanningSet& s, int m, std::size_t trials = 0,
                                 const SampleOptions& opt = {}) {
  if (trials == 0) trials = 3 * s.size();
  return solve_coefficients(polynomial_target(p), s, m, trials, opt);
}

/// True iff u = lambda v for some nonzero lambda.
inline bool proportional(const RationalVector& u, const RationalVector& v) {
  if (u.size() != v.size()) return false;
  const auto a = primitive_integer_vector(u);
  const auto b = primitive_integer_vector(v);
  const bool za = std::all_of(a.begin(), a.end(), [](const Integer& x) { return x == 0; });
  const bool zb = std::all_of(b.begin(), b.end(), [](const Integer& x) { return x == 0; });
  return !za && !zb && a == b;
}

/// A monomial has the critical degree profile in dimension m when it has no
/// covariant derivatives and its labels can be assigned the m distinct
/// indices so that every index appears in exactly two slots.
inline bool has_critical_degree_profile(const Monomial& mono, int m) {
  if (mono.max_derivs() != 0) return false;
  const int labels = label_count(mono);
  if (labels != m) return false;
  std::vector<int> assignment(static_cast<std::size_t>(labels));
  for (int l = 0; l < labels; ++l) assignment[static_cast<std::size_t>(l)] = l;
  for (int k = 0; k < m; ++k)
    if (degree_profile(mono, k, assignment) != 2) return false;
  return true;
}

struct GramCheck {
  int dim = 0;
  std::uint64_t seed = 0;
  Rational determinant;    // (m+1) x (m+1), must vanish
  Rational leading_minor;  // m x m, generically nonzero

  bool relation_holds() const { return is_zero(determinant); }
  bool minor_nonzero() const { return !is_zero(leading_minor); }
};

/// Scalar products <v^a, w^b> of m + 1 random vectors in dimension m: the
/// full Gram determinant vanishes, its leading m x m minor does not.
inline GramCheck gram_relation_check(int m, std::uint64_t seed) {
  if (m < 1) throw DomainError("dimension must be positive");
  Rng rng(seed);
  auto draw = [&] {
    RationalMatrix vs(static_cast<std::size_t>(m + 1), RationalVector(static_cast<std::size_t>(m)));
    for (auto& v : vs)
      for (auto& x : v)
        do x = random_small_rational(rng, 99);
        while (is_zero(x));
    return vs;
  };
  const auto v = draw();
  const auto w = draw();
  RationalMatrix g(static_cast<std::size_t>(m + 1), RationalVector(static_cast<std::size_t>(m + 1)));
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = 0; b < g.size(); ++b)
      for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) g[a][b] += v[a][i] * w[b][i];
  RationalMatrix minor(static_cast<std::size_t>(m), RationalVector(static_cast<std::size_t>(m)));
  for (std::size_t a = 0; a < minor.size(); ++a)
    for (std::size_t b = 0; b < minor.size(); ++b) minor[a][b] = g[a][b];
  return GramCheck{m, seed, determinant(g), determinant(minor)};
}

}  // namespace curvid
